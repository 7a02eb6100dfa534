#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gdrc/core_set.hpp"
#include "gdrc/dataset.hpp"
#include "gdrc/models.hpp"

namespace gdrc::bench {

// Fraction of test points whose predicted label matches the true label.
double accuracy(const models::TrainedClassifier& classifier, const Dataset& test);

// Two-class Gaussian data: N/2 points per class from
// N(+-mean_scale * 1_n, cov_scale * I_n). Deterministic per seed.
Dataset gaussian_generator(std::size_t n, std::size_t total, double mean_scale, double cov_scale,
                           std::uint64_t seed);

struct ModelSpec {
    models::ModelKind kind = models::ModelKind::Svm;
    double rank_fraction = 1.0;  // GdrcApp: r = max(1, round(fraction * n))
    std::string display_name() const;
};

struct ExperimentConfig {
    AmbiguityConfig ambiguity;
    double C = 16.0;
    double drc_cov_scale = 0.01;
    double drc_quantile = 0.9;
    std::size_t drc_n0 = 100;
    // Relative diagonal ridge added to the class covariances before the
    // spectral factorization (times trace/n); stabilizes nearly constant
    // feature columns in real data.
    double moment_ridge = 0.0;
    double train_fraction = 0.2;
    bool scale_features = false;
    // Generators: redraw the data each trial (fresh data); otherwise only the
    // split is re-randomized.
    bool redraw_each_trial = true;
    std::size_t workers = 0;  // 0: GDRC_WORKERS env var, else 1
    double solver_tolerance = 1e-8;
};

struct TrialResult {
    bool ok = false;
    std::string status;
    double acc = 0.0;       // fraction
    double acc_pos = 0.0;
    double acc_neg = 0.0;
    double objective = 0.0;
    double seconds = 0.0;
    double worst_psd_eig = 0.0;  // from independent validation (GDRC kinds)
    std::optional<double> gap;    // full-minus-approximation objective
    std::optional<double> bound;  // certificate gap bound
};

struct ModelRow {
    std::string name;
    std::size_t ok = 0;
    std::size_t failed = 0;
    double acc_mean = 0.0, acc_std = 0.0;      // percent
    double acc_pos_mean = 0.0, acc_neg_mean = 0.0;
    double time_mean = 0.0, time_std = 0.0;    // seconds
    double obj_mean = 0.0, obj_std = 0.0;
    std::optional<double> gap_mean, bound_mean;
    std::vector<TrialResult> trials;
};

struct BenchmarkReport {
    std::string experiment;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<ModelRow> rows;
    std::string config_echo;  // resolved configuration, JSON
    std::string environment;

    // include_timing=false produces the byte-stable variant used for
    // reproducibility comparisons.
    std::string to_json(bool include_timing = true) const;
    std::string to_table() const;
    std::string to_csv() const;  // per-trial raw results
};

using DataSource = std::function<Dataset(std::uint64_t seed)>;

// Repeated-trial experiment: trial t splits (and, for generators, redraws)
// with seed + t, trains every requested model on the same split, and
// aggregates mean / sample standard deviation. Solver failures are excluded
// from the statistics and counted per row.
BenchmarkReport run_experiment(const DataSource& source, const std::vector<ModelSpec>& specs,
                               std::size_t trials, std::uint64_t seed,
                               const ExperimentConfig& config, const std::string& name);

}  // namespace gdrc::bench
