#include "gdrc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <tuple>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gdrc/fdist.hpp"
#include "gdrc/rng.hpp"

namespace gdrc::bench {

double accuracy(const models::TrainedClassifier& classifier, const Dataset& test) {
    if (test.size() == 0) throw DegenerateDataset("empty test set");
    std::size_t hits = 0;
    Vector x(test.dim());
    for (std::size_t i = 0; i < test.size(); ++i) {
        for (std::size_t j = 0; j < test.dim(); ++j) x[j] = test.features(i, j);
        if (classifier.predict(x) == test.labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(test.size());
}

Dataset gaussian_generator(std::size_t n, std::size_t total, double mean_scale, double cov_scale,
                           std::uint64_t seed) {
    if (n == 0 || total == 0 || total % 2 != 0)
        throw ConfigError("gaussian_generator needs positive n and even N");
    Rng rng(seed);
    const double sd = std::sqrt(cov_scale);
    Dataset d;
    d.features = Matrix(total, n);
    d.labels.resize(total);
    const std::size_t half = total / 2;
    for (std::size_t i = 0; i < total; ++i) {
        const double sign = i < half ? 1.0 : -1.0;
        d.labels[i] = i < half ? 1 : -1;
        for (std::size_t j = 0; j < n; ++j)
            d.features(i, j) = sign * mean_scale + sd * rng.normal();
    }
    std::ostringstream name;
    name << "gauss(n=" << n << ",N=" << total << ",mean=" << mean_scale << ",cov=" << cov_scale
         << ")";
    d.name = name.str();
    d.rebuild_class_index();
    return d;
}

std::string ModelSpec::display_name() const {
    if (kind != models::ModelKind::GdrcApp) return models::model_name(kind);
    std::ostringstream os;
    os << "GDRC-SVM-app(" << static_cast<int>(std::lround(rank_fraction * 100)) << "%)";
    return os.str();
}

namespace {

struct MeanStd {
    double mean = 0.0, std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd ms;
    if (xs.empty()) return ms;
    for (double x : xs) ms.mean += x;
    ms.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double acc = 0.0;
        for (double x : xs) acc += (x - ms.mean) * (x - ms.mean);
        ms.std = std::sqrt(acc / static_cast<double>(xs.size() - 1));
    }
    return ms;
}

double class_accuracy(const models::TrainedClassifier& c, const Dataset& test, int k) {
    const auto& rows = test.class_index[k];
    if (rows.empty()) return 0.0;
    std::size_t hits = 0;
    Vector x(test.dim());
    for (std::size_t i : rows) {
        for (std::size_t j = 0; j < test.dim(); ++j) x[j] = test.features(i, j);
        if (c.predict(x) == test.labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(rows.size());
}

std::size_t resolve_workers(std::size_t configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("GDRC_WORKERS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 1;
}

struct TrialOutput {
    std::vector<TrialResult> per_model;
};

}  // namespace

BenchmarkReport run_experiment(const DataSource& source, const std::vector<ModelSpec>& specs,
                               std::size_t trials, std::uint64_t seed,
                               const ExperimentConfig& config, const std::string& name) {
    if (trials == 0) throw ConfigError("trials must be >= 1");
    config.ambiguity.check();

    std::vector<TrialOutput> outputs(trials);

    auto run_trial = [&](std::size_t t) {
        const std::uint64_t trial_seed = seed + t;
        // Data or split failures take down the whole trial: every model row
        // records the reason.
        TrialOutput& slot = outputs[t];
        slot.per_model.resize(specs.size());
        Dataset full;
        try {
            full = source(config.redraw_each_trial ? trial_seed : seed);
        } catch (const Error& e) {
            for (auto& r : slot.per_model) r.status = std::string("error: ") + e.what();
            return;
        }
        Dataset train, test;
        MomentProfile prof[2];
        CoreSets cores;
        double nu_sq = 0.0;
        try {
            std::tie(train, test) = split(full, SplitSpec{config.train_fraction, trial_seed, true});
            if (config.scale_features) {
                MinMaxScaler scaler;
                scaler.fit(train);
                scaler.apply(train);
                scaler.apply(test);
            }
            for (int k = 0; k < 2; ++k) {
                prof[k] = sample_moments(train.class_points(k), 0.0);
                if (config.moment_ridge > 0.0) {
                    double tr = 0.0;
                    const std::size_t n = prof[k].dim();
                    for (std::size_t i = 0; i < n; ++i) tr += prof[k].covariance(i, i);
                    const double ridge = config.moment_ridge * tr / static_cast<double>(n);
                    for (std::size_t i = 0; i < n; ++i) prof[k].covariance(i, i) += ridge;
                }
                prof[k].gamma1 = config.ambiguity.gamma1;
                prof[k].gamma2 = config.ambiguity.gamma2;
                prof[k].finalize();
            }
            const bool wants_gdrc_kind =
                std::any_of(specs.begin(), specs.end(), [](const ModelSpec& s) {
                    return s.kind == models::ModelKind::Gdrc ||
                           s.kind == models::ModelKind::GdrcApp;
                });
            if (wants_gdrc_kind) cores = build_core_sets(prof[0], prof[1], train, config.ambiguity);

            const bool wants_drc_mu =
                std::any_of(specs.begin(), specs.end(), [](const ModelSpec& s) {
                    return s.kind == models::ModelKind::DrcMu;
                });
            if (wants_drc_mu)
                nu_sq = drc_mean_radius(train.dim(), config.drc_n0, config.drc_quantile);
        } catch (const Error& e) {
            for (auto& r : slot.per_model) r.status = std::string("error: ") + e.what();
            return;
        }

        // Full-model objective for the gap column, solved once per trial when
        // an approximation row asks for it.
        std::optional<double> full_objective;

        TrialOutput out;
        out.per_model.resize(specs.size());
        for (std::size_t s = 0; s < specs.size(); ++s) {
            const ModelSpec& spec = specs[s];
            TrialResult& res = out.per_model[s];
            try {
                const auto t0 = std::chrono::steady_clock::now();
                models::CompiledModel compiled;
                switch (spec.kind) {
                    case models::ModelKind::Svm:
                        compiled = models::build_svm(train, config.C);
                        break;
                    case models::ModelKind::Drc:
                        compiled = models::build_drc(train, config.C, config.ambiguity.epsilon,
                                                     config.drc_cov_scale);
                        break;
                    case models::ModelKind::DrcMu:
                        compiled = models::build_drc_mu(train, config.C, config.ambiguity.epsilon,
                                                        config.drc_cov_scale, nu_sq);
                        break;
                    case models::ModelKind::Gdrc:
                        compiled = models::build_gdrc(prof[0], prof[1], cores, config.C,
                                                      config.ambiguity.epsilon);
                        break;
                    case models::ModelKind::GdrcApp: {
                        const auto rank = static_cast<std::size_t>(std::max<long>(
                            1, std::lround(spec.rank_fraction *
                                           static_cast<double>(train.dim()))));
                        compiled = models::build_gdrc_app(prof[0], prof[1], cores, config.C,
                                                          config.ambiguity.epsilon,
                                                          std::min(rank, train.dim()));
                        break;
                    }
                }
                models::TrainResult trained = models::train(compiled, config.solver_tolerance);
                const auto t1 = std::chrono::steady_clock::now();
                res.seconds = std::chrono::duration<double>(t1 - t0).count();
                res.status = conic::status_name(trained.solution.status);
                if (trained.solution.status != conic::Status::Optimal) continue;

                res.ok = true;
                res.acc = accuracy(trained.classifier, test);
                res.acc_pos = class_accuracy(trained.classifier, test, 0);
                res.acc_neg = class_accuracy(trained.classifier, test, 1);
                res.objective = trained.solution.objective;
                res.worst_psd_eig = trained.validation.worst_psd_eig;

                if (spec.kind == models::ModelKind::Gdrc) full_objective = res.objective;
                if (spec.kind == models::ModelKind::GdrcApp) {
                    res.bound = models::gap_bound(trained.classifier, prof[0], prof[1], config.C);
                    if (full_objective) res.gap = *full_objective - res.objective;
                }
            } catch (const Error& e) {
                res.ok = false;
                res.status = std::string("error: ") + e.what();
            }
        }
        outputs[t] = std::move(out);
    };

    const std::size_t workers = std::min(resolve_workers(config.workers), trials);
    if (workers <= 1) {
        for (std::size_t t = 0; t < trials; ++t) run_trial(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t wk = 0; wk < workers; ++wk) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t t = next.fetch_add(1);
                    if (t >= trials) return;
                    run_trial(t);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    BenchmarkReport rep;
    rep.experiment = name;
    rep.trials = trials;
    rep.seed = seed;
    {
        nlohmann::json cfg;
        cfg["C"] = config.C;
        cfg["epsilon"] = config.ambiguity.epsilon;
        cfg["lambda"] = config.ambiguity.lambda;
        cfg["theta"] = config.ambiguity.theta;
        cfg["containment_fraction"] = config.ambiguity.containment_fraction;
        cfg["gamma1"] = config.ambiguity.gamma1;
        cfg["gamma2"] = config.ambiguity.gamma2;
        cfg["p_norm"] = norm_name(config.ambiguity.p_norm);
        cfg["m_per_class"] = config.ambiguity.m_per_class;
        cfg["train_fraction"] = config.train_fraction;
        cfg["drc_cov_scale"] = config.drc_cov_scale;
        cfg["drc_quantile"] = config.drc_quantile;
        cfg["drc_n0"] = config.drc_n0;
        cfg["moment_ridge"] = config.moment_ridge;
        cfg["scale_features"] = config.scale_features;
        cfg["redraw_each_trial"] = config.redraw_each_trial;
        cfg["solver_tolerance"] = config.solver_tolerance;
        cfg["trials"] = trials;
        cfg["seed"] = seed;
        rep.config_echo = cfg.dump();
    }
    {
        std::ostringstream env;
        env << "threads=" << workers << " kernels=" << kernels::name(kernels::active())
            << " (timings are hardware-dependent and not comparable across machines)";
        rep.environment = env.str();
    }

    for (std::size_t s = 0; s < specs.size(); ++s) {
        ModelRow row;
        row.name = specs[s].display_name();
        std::vector<double> accs, accp, accn, times, objs, gaps, bounds;
        for (std::size_t t = 0; t < trials; ++t) {
            const TrialResult& r = outputs[t].per_model[s];
            row.trials.push_back(r);
            if (!r.ok) {
                ++row.failed;
                continue;
            }
            ++row.ok;
            accs.push_back(r.acc * 100.0);
            accp.push_back(r.acc_pos * 100.0);
            accn.push_back(r.acc_neg * 100.0);
            times.push_back(r.seconds);
            objs.push_back(r.objective);
            if (r.gap) gaps.push_back(*r.gap);
            if (r.bound) bounds.push_back(*r.bound);
        }
        const MeanStd a = mean_std(accs), tm = mean_std(times), ob = mean_std(objs);
        row.acc_mean = a.mean;
        row.acc_std = a.std;
        row.acc_pos_mean = mean_std(accp).mean;
        row.acc_neg_mean = mean_std(accn).mean;
        row.time_mean = tm.mean;
        row.time_std = tm.std;
        row.obj_mean = ob.mean;
        row.obj_std = ob.std;
        if (!gaps.empty()) row.gap_mean = mean_std(gaps).mean;
        if (!bounds.empty()) row.bound_mean = mean_std(bounds).mean;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::string BenchmarkReport::to_json(bool include_timing) const {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["trials"] = trials;
    j["seed"] = seed;
    j["config"] = nlohmann::json::parse(config_echo);
    if (include_timing) j["environment"] = environment;
    nlohmann::json jrows = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json jr;
        jr["model"] = r.name;
        jr["trials_ok"] = r.ok;
        jr["trials_failed"] = r.failed;
        if (r.failed > 0 && r.ok == 0) jr["status"] = "ModelFailed";
        jr["acc_mean"] = r.acc_mean;
        jr["acc_std"] = r.acc_std;
        jr["acc_pos_mean"] = r.acc_pos_mean;
        jr["acc_neg_mean"] = r.acc_neg_mean;
        jr["objective_mean"] = r.obj_mean;
        jr["objective_std"] = r.obj_std;
        if (r.gap_mean) jr["gap_mean"] = *r.gap_mean;
        if (r.bound_mean) jr["bound_mean"] = *r.bound_mean;
        if (include_timing) {
            jr["time_mean_s"] = r.time_mean;
            jr["time_std_s"] = r.time_std;
        }
        jrows.push_back(std::move(jr));
    }
    j["rows"] = std::move(jrows);
    return j.dump(2);
}

std::string BenchmarkReport::to_table() const {
    std::ostringstream os;
    os << "experiment: " << experiment << "  (trials=" << trials << ", seed=" << seed << ")\n";
    os << "note: " << environment << "\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-22s %9s %8s %9s %9s %10s %10s %8s\n", "model", "acc(%)",
                  "std", "acc+(%)", "acc-(%)", "time(s)", "val", "fails");
    os << line;
    for (const auto& r : rows) {
        if (r.ok == 0) {
            std::snprintf(line, sizeof line, "%-22s %9s %8s %9s %9s %10s %10s %8zu\n",
                          r.name.c_str(), "-", "-", "-", "-", "-", "-", r.failed);
            os << line;
            continue;
        }
        std::snprintf(line, sizeof line, "%-22s %9.2f %8.2f %9.2f %9.2f %10.3f %10.4f %8zu\n",
                      r.name.c_str(), r.acc_mean, r.acc_std, r.acc_pos_mean, r.acc_neg_mean,
                      r.time_mean, r.obj_mean, r.failed);
        os << line;
        if (r.gap_mean || r.bound_mean) {
            os << "    ";
            if (r.gap_mean) os << "gap=" << *r.gap_mean << "  ";
            if (r.bound_mean) os << "ub=" << *r.bound_mean;
            os << "\n";
        }
    }
    return os.str();
}

std::string BenchmarkReport::to_csv() const {
    std::ostringstream os;
    os << "model,trial,ok,status,acc,acc_pos,acc_neg,objective,seconds,gap,bound\n";
    for (const auto& r : rows) {
        for (std::size_t t = 0; t < r.trials.size(); ++t) {
            const TrialResult& x = r.trials[t];
            os << r.name << ',' << t << ',' << (x.ok ? 1 : 0) << ',' << x.status << ',' << x.acc
               << ',' << x.acc_pos << ',' << x.acc_neg << ',' << x.objective << ',' << x.seconds
               << ',';
            if (x.gap) os << *x.gap;
            os << ',';
            if (x.bound) os << *x.bound;
            os << '\n';
        }
    }
    return os.str();
}

}  // namespace gdrc::bench
