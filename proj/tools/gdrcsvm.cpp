// Command-line front end: train | predict | benchmark.
//
// Exit codes: 0 success, 2 usage/config error, 3 data error, 4 solver
// failure.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gdrc/bench.hpp"
#include "gdrc/data_io.hpp"
#include "gdrc/fdist.hpp"
#include "gdrc/models.hpp"
#include "gdrc/presets.hpp"

namespace fs = std::filesystem;
using namespace gdrc;

namespace {

struct DataOptions {
    std::string data;
    std::string format = "csv";
    std::string label_col = "class";
    std::string positive_label = "1";
    std::size_t max_rows = 0;
    std::uint64_t seed = 1;
};

// Named generators ("demo2d", "gauss:n=..,N=..,mean=..,cov=..") or files.
Dataset load_dataset(const DataOptions& o, std::uint64_t seed) {
    if (o.data == "demo2d") return bench::gaussian_generator(2, 100, 1.0, 1.0, seed);
    if (o.data.rfind("gauss:", 0) == 0) {
        std::size_t n = 2, total = 100;
        double mean = 1.0, cov = 1.0;
        std::stringstream ss(o.data.substr(6));
        std::string kv;
        while (std::getline(ss, kv, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("bad generator spec '" + o.data + "'");
            const std::string key = kv.substr(0, eq);
            const double val = std::stod(kv.substr(eq + 1));
            if (key == "n") n = static_cast<std::size_t>(val);
            else if (key == "N") total = static_cast<std::size_t>(val);
            else if (key == "mean") mean = val;
            else if (key == "cov") cov = val;
            else throw ConfigError("unknown generator key '" + key + "'");
        }
        return bench::gaussian_generator(n, total, mean, cov, seed);
    }
    Dataset d = o.format == "svmlight" ? parse_svmlight(o.data)
                                       : parse_csv(o.data, o.label_col, o.positive_label);
    if (o.max_rows > 0 && d.size() > o.max_rows) d = subsample(d, o.max_rows, seed);
    return d;
}

models::ModelKind parse_kind(const std::string& name) {
    if (name == "svm") return models::ModelKind::Svm;
    if (name == "drc") return models::ModelKind::Drc;
    if (name == "drc-mu") return models::ModelKind::DrcMu;
    if (name == "gdrc") return models::ModelKind::Gdrc;
    if (name == "gdrc-app") return models::ModelKind::GdrcApp;
    throw ConfigError("unknown model '" + name + "' (svm|drc|drc-mu|gdrc|gdrc-app)");
}

NormOrder parse_norm(const std::string& p) {
    if (p == "1") return NormOrder::One;
    if (p == "2") return NormOrder::Two;
    if (p == "inf") return NormOrder::Inf;
    throw ConfigError("p_norm must be one of 1, 2, inf");
}

void write_file(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream(path) << contents;
}

// Every run leaves its fully resolved configuration next to its outputs.
std::string config_echo_json(const bench::ExperimentConfig& cfg, const DataOptions& data,
                             const std::string& extra_key, const std::string& extra_value) {
    std::ostringstream os;
    os << "{\n"
       << "  \"data\": \"" << data.data << "\",\n"
       << "  \"format\": \"" << data.format << "\",\n"
       << "  \"label_col\": \"" << data.label_col << "\",\n"
       << "  \"positive_label\": \"" << data.positive_label << "\",\n"
       << "  \"seed\": " << data.seed << ",\n"
       << "  \"C\": " << cfg.C << ",\n"
       << "  \"epsilon\": " << cfg.ambiguity.epsilon << ",\n"
       << "  \"lambda\": " << cfg.ambiguity.lambda << ",\n"
       << "  \"theta\": " << cfg.ambiguity.theta << ",\n"
       << "  \"containment_fraction\": " << cfg.ambiguity.containment_fraction << ",\n"
       << "  \"gamma1\": " << cfg.ambiguity.gamma1 << ",\n"
       << "  \"gamma2\": " << cfg.ambiguity.gamma2 << ",\n"
       << "  \"p_norm\": \"" << norm_name(cfg.ambiguity.p_norm) << "\",\n"
       << "  \"m_per_class\": " << cfg.ambiguity.m_per_class << ",\n"
       << "  \"radius_policy\": \""
       << (cfg.ambiguity.radius_policy == RadiusPolicy::MeanScaled ? "mean_scaled"
                                                                   : "containment")
       << "\",\n"
       << "  \"radius_mean_scale\": " << cfg.ambiguity.radius_mean_scale << ",\n"
       << "  \"train_fraction\": " << cfg.train_fraction << ",\n"
       << "  \"scale_features\": " << (cfg.scale_features ? "true" : "false") << ",\n"
       << "  \"solver_tolerance\": " << cfg.solver_tolerance << ",\n"
       << "  \"moment_ridge\": " << cfg.moment_ridge << ",\n"
       << "  \"" << extra_key << "\": " << extra_value << "\n"
       << "}\n";
    return os.str();
}

// Shared experiment knobs, exposed both as flags and config-file keys.
void add_ambiguity_options(CLI::App* cmd, bench::ExperimentConfig& cfg, std::string& p_norm,
                           std::string& radius_policy) {
    cmd->add_option("--lambda", cfg.ambiguity.lambda, "core-set center interpolation in [0,0.5)");
    cmd->add_option("--theta", cfg.ambiguity.theta, "core-set attention weight");
    cmd->add_option("--containment-fraction", cfg.ambiguity.containment_fraction,
                    "training-point share each core set must contain");
    cmd->add_option("--gamma1", cfg.ambiguity.gamma1, "mean confidence radius");
    cmd->add_option("--gamma2", cfg.ambiguity.gamma2, "covariance dominance factor (>= 1)");
    cmd->add_option("--epsilon", cfg.ambiguity.epsilon, "risk level in (0,1)");
    cmd->add_option("--p-norm", p_norm, "core-set norm order: 1, 2 or inf");
    cmd->add_option("--m-per-class", cfg.ambiguity.m_per_class, "core sets per class");
    cmd->add_option("--radius-policy", radius_policy, "containment | mean_scaled");
    cmd->add_option("--radius-scale", cfg.ambiguity.radius_mean_scale,
                    "radius multiplier for mean_scaled");
    cmd->add_option("--C", cfg.C, "slack tradeoff weight");
    cmd->add_option("--drc-cov-scale", cfg.drc_cov_scale, "per-sample covariance scale");
    cmd->add_option("--moment-ridge", cfg.moment_ridge,
                    "relative diagonal ridge on the class covariances");
    cmd->add_option("--train-fraction", cfg.train_fraction, "training share of the data");
    cmd->add_flag("--scale", cfg.scale_features, "min-max scale features (fitted on train)");
    cmd->add_option("--solver-tolerance", cfg.solver_tolerance, "interior-point tolerance");
    cmd->add_option("--workers", cfg.workers, "trial worker threads (0: GDRC_WORKERS env)");
}

void apply_norms(bench::ExperimentConfig& cfg, const std::string& p_norm,
                 const std::string& radius_policy) {
    cfg.ambiguity.p_norm = parse_norm(p_norm);
    if (radius_policy == "containment")
        cfg.ambiguity.radius_policy = RadiusPolicy::Containment;
    else if (radius_policy == "mean_scaled")
        cfg.ambiguity.radius_policy = RadiusPolicy::MeanScaled;
    else
        throw ConfigError("radius-policy must be containment or mean_scaled");
}

std::string sanitized(std::string name) {
    for (char& c : name)
        if (c == '/' || c == ' ') c = '_';
    return name;
}

int cmd_train(const DataOptions& data_opts, bench::ExperimentConfig cfg,
              const std::string& model_name, double rank_fraction, const std::string& out_dir,
              std::uint64_t seed) {
    Dataset full = load_dataset(data_opts, seed);
    auto [train, test] = split(full, SplitSpec{cfg.train_fraction, seed, true});
    if (cfg.scale_features) {
        MinMaxScaler sc;
        sc.fit(train);
        sc.apply(train);
        sc.apply(test);
    }

    MomentProfile prof[2];
    for (int k = 0; k < 2; ++k) {
        prof[k] = sample_moments(train.class_points(k), 0.0);
        if (cfg.moment_ridge > 0.0) {
            double tr = 0.0;
            for (std::size_t i = 0; i < prof[k].dim(); ++i) tr += prof[k].covariance(i, i);
            const double ridge = cfg.moment_ridge * tr / static_cast<double>(prof[k].dim());
            for (std::size_t i = 0; i < prof[k].dim(); ++i) prof[k].covariance(i, i) += ridge;
        }
        prof[k].gamma1 = cfg.ambiguity.gamma1;
        prof[k].gamma2 = cfg.ambiguity.gamma2;
        prof[k].finalize();
    }

    const models::ModelKind kind = parse_kind(model_name);
    models::CompiledModel compiled;
    switch (kind) {
        case models::ModelKind::Svm:
            compiled = models::build_svm(train, cfg.C);
            break;
        case models::ModelKind::Drc:
            compiled = models::build_drc(train, cfg.C, cfg.ambiguity.epsilon, cfg.drc_cov_scale);
            break;
        case models::ModelKind::DrcMu: {
            const double nu_sq = drc_mean_radius(train.dim(), cfg.drc_n0, cfg.drc_quantile);
            compiled = models::build_drc_mu(train, cfg.C, cfg.ambiguity.epsilon,
                                            cfg.drc_cov_scale, nu_sq);
            break;
        }
        case models::ModelKind::Gdrc:
        case models::ModelKind::GdrcApp: {
            CoreSets cores = build_core_sets(prof[0], prof[1], train, cfg.ambiguity);
            if (kind == models::ModelKind::Gdrc) {
                compiled = models::build_gdrc(prof[0], prof[1], cores, cfg.C,
                                              cfg.ambiguity.epsilon);
            } else {
                const auto rank = static_cast<std::size_t>(std::max<long>(
                    1, std::lround(rank_fraction * static_cast<double>(train.dim()))));
                compiled = models::build_gdrc_app(prof[0], prof[1], cores, cfg.C,
                                                  cfg.ambiguity.epsilon,
                                                  std::min(rank, train.dim()));
            }
            break;
        }
    }

    models::TrainResult result = models::train(compiled, cfg.solver_tolerance);
    std::cout << "solver status: " << conic::status_name(result.solution.status) << " ("
              << result.solution.iterations << " iterations)\n";
    if (result.solution.status != conic::Status::Optimal) return 4;

    write_file(fs::path(out_dir) / "classifier.json", result.classifier.to_json());
    write_file(fs::path(out_dir) / "validation.txt", result.validation.to_string() + "\n");
    write_file(fs::path(out_dir) / "run_config.json",
               config_echo_json(cfg, data_opts, "model", "\"" + model_name + "\""));

    const double acc = bench::accuracy(result.classifier, test);
    std::cout << "objective: " << result.classifier.objective << "\n"
              << "test accuracy: " << acc * 100.0 << "% (" << test.size() << " points)\n"
              << "validation: " << (result.validation.passed ? "pass" : "FAIL") << "\n"
              << "wrote " << (fs::path(out_dir) / "classifier.json").string() << "\n";
    if (norm2(result.classifier.w) <= 1e-3)
        std::cout << "warning: ||w|| ~ 0; the robust region dominates (raise theta or shrink "
                     "the core sets)\n";
    return 0;
}

int cmd_predict(const std::string& classifier_path, const DataOptions& data_opts,
                const std::string& out_dir) {
    std::ifstream in(classifier_path);
    if (!in) throw Error("cannot open '" + classifier_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const auto classifier = models::TrainedClassifier::from_json(buf.str());

    Dataset d = load_dataset(data_opts, data_opts.seed);
    if (d.dim() != classifier.w.size())
        throw ShapeError("classifier dimension " + std::to_string(classifier.w.size()) +
                         " does not match data dimension " + std::to_string(d.dim()));

    std::ostringstream labels;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const int pred = classifier.predict(d.row_vector(i));
        labels << (pred > 0 ? "+1" : "-1") << '\n';
        if (pred == d.labels[i]) ++hits;
    }
    write_file(fs::path(out_dir) / "predictions.txt", labels.str());
    write_file(fs::path(out_dir) / "run_config.json",
               config_echo_json(bench::ExperimentConfig{}, data_opts, "classifier",
                                "\"" + classifier_path + "\""));
    std::cout << "wrote " << (fs::path(out_dir) / "predictions.txt").string() << " ("
              << d.size() << " labels)\n";
    std::cout << "accuracy against provided labels: "
              << 100.0 * static_cast<double>(hits) / static_cast<double>(d.size()) << "%\n";
    return 0;
}

int run_benchmark_experiments(const std::vector<bench::Experiment>& experiments,
                              std::size_t trials, std::uint64_t seed,
                              const std::string& out_dir) {
    bool any_failed = false;
    for (const auto& e : experiments) {
        bench::BenchmarkReport rep =
            bench::run_experiment(e.source, e.specs, trials, seed, e.config, e.name);
        const std::string base = sanitized(e.name);
        write_file(fs::path(out_dir) / (base + ".json"), rep.to_json(true));
        write_file(fs::path(out_dir) / (base + ".stable.json"), rep.to_json(false));
        write_file(fs::path(out_dir) / (base + ".csv"), rep.to_csv());
        write_file(fs::path(out_dir) / (base + ".txt"), rep.to_table());
        std::cout << rep.to_table() << "\n";
        for (const auto& row : rep.rows)
            if (row.ok == 0) any_failed = true;
    }
    return any_failed ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"training and benchmarking for distributionally robust chance-constrained "
                 "support vector machines"};
    app.require_subcommand(1);

    DataOptions data_opts;
    bench::ExperimentConfig cfg;
    std::string p_norm = "2", radius_policy = "containment";
    std::string model_name = "gdrc", out_dir = "out", classifier_path;
    std::string preset, models_list = "svm,drc,drc-mu,gdrc", data_dir = "data";
    double rank_fraction = 1.0;
    std::size_t trials = 20, gauss_samples = 0;
    std::uint64_t seed = 1;

    auto add_data_options = [&](CLI::App* cmd, bool required) {
        auto* opt = cmd->add_option("--data", data_opts.data,
                                    "dataset file, 'demo2d', or 'gauss:n=..,N=..,mean=..,cov=..'");
        if (required) opt->required();
        cmd->add_option("--format", data_opts.format, "csv | svmlight");
        cmd->add_option("--label-col", data_opts.label_col, "CSV label column name");
        cmd->add_option("--positive-label", data_opts.positive_label,
                        "label value mapped to +1");
        cmd->add_option("--max-rows", data_opts.max_rows, "subsample cap (0: keep all)");
    };

    CLI::App* train_cmd = app.add_subcommand("train", "train one model, write classifier JSON");
    train_cmd->set_config("--config")->description("flat key=value configuration file");
    train_cmd->add_option("--model", model_name, "svm | drc | drc-mu | gdrc | gdrc-app");
    train_cmd->add_option("--rank-fraction", rank_fraction, "gdrc-app rank as share of n");
    train_cmd->add_option("--seed", seed, "split / generator seed");
    train_cmd->add_option("--out", out_dir, "output directory");
    add_data_options(train_cmd, true);
    add_ambiguity_options(train_cmd, cfg, p_norm, radius_policy);

    CLI::App* predict_cmd = app.add_subcommand("predict", "label a dataset with a classifier");
    predict_cmd->set_config("--config")->description("flat key=value configuration file");
    predict_cmd->add_option("--classifier", classifier_path, "classifier JSON path")->required();
    predict_cmd->add_option("--out", out_dir, "output directory");
    predict_cmd->add_option("--seed", seed, "generator seed for synthetic data sources");
    add_data_options(predict_cmd, true);

    CLI::App* bench_cmd = app.add_subcommand("benchmark", "repeated-trial experiment runner");
    bench_cmd->set_config("--config")->description("flat key=value configuration file");
    bench_cmd->add_option("--preset", preset,
                          "table1 | table2 | table3 | table5 | table6 | table7 | demo2d");
    bench_cmd->add_option("--models", models_list, "comma list for custom runs");
    bench_cmd->add_option("--trials", trials, "repetitions");
    bench_cmd->add_option("--seed", seed, "base seed; trial t uses seed+t");
    bench_cmd->add_option("--out", out_dir, "output directory");
    bench_cmd->add_option("--data-dir", data_dir, "directory with the bundled datasets");
    bench_cmd->add_option("--gauss-samples", gauss_samples, "override preset sample count");
    bench_cmd->add_option("--rank-fraction", rank_fraction, "gdrc-app rank share for --models");
    add_data_options(bench_cmd, false);
    add_ambiguity_options(bench_cmd, cfg, p_norm, radius_policy);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        apply_norms(cfg, p_norm, radius_policy);
        data_opts.seed = seed;

        if (*train_cmd) return cmd_train(data_opts, cfg, model_name, rank_fraction, out_dir, seed);
        if (*predict_cmd) return cmd_predict(classifier_path, data_opts, out_dir);

        // benchmark
        if (!preset.empty()) {
            bench::PresetOverrides ov;
            ov.data_dir = data_dir;
            ov.max_rows = data_opts.max_rows;
            ov.gauss_samples = gauss_samples;
            ov.scale_features = cfg.scale_features;
            return run_benchmark_experiments(bench::make_preset(preset, ov), trials, seed,
                                             out_dir);
        }
        if (data_opts.data.empty()) throw ConfigError("benchmark needs --preset or --data");
        std::vector<bench::ModelSpec> specs;
        std::stringstream ss(models_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            bench::ModelSpec spec;
            if (tok.rfind("gdrc-app", 0) == 0) {
                spec.kind = models::ModelKind::GdrcApp;
                spec.rank_fraction = rank_fraction;
                const auto open = tok.find('(');
                if (open != std::string::npos)
                    spec.rank_fraction = std::stod(tok.substr(open + 1)) / 100.0;
            } else {
                spec.kind = parse_kind(tok);
            }
            specs.push_back(spec);
        }
        bench::Experiment e;
        e.name = "custom";
        const DataOptions opts = data_opts;
        e.source = [opts](std::uint64_t s) { return load_dataset(opts, s); };
        e.specs = std::move(specs);
        e.config = cfg;
        return run_benchmark_experiments({e}, trials, seed, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    }
}
