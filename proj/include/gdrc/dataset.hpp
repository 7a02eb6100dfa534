#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gdrc/matrix.hpp"

namespace gdrc {

// Binary-labeled feature vectors. Class k=1 is label +1, class k=2 is -1.
struct Dataset {
    Matrix features;              // N x n
    std::vector<int> labels;      // each +1 or -1
    std::vector<std::size_t> class_index[2];  // [0]: rows with +1, [1]: rows with -1
    std::string name;
    std::size_t dropped_rows = 0;  // rows discarded for missing values at parse time

    std::size_t size() const { return labels.size(); }
    std::size_t dim() const { return features.cols(); }
    std::size_t count_positive() const { return class_index[0].size(); }
    std::size_t count_negative() const { return class_index[1].size(); }

    void rebuild_class_index();

    // Feature rows of one class as vectors (k = 0 for +1, 1 for -1).
    std::vector<Vector> class_points(int k) const;

    Vector row_vector(std::size_t i) const;

    // {name, n, n_pos, n_neg} summary.
    std::string summary_json() const;

    // Requires both classes non-empty; throws DegenerateDataset.
    void require_two_classes() const;
};

struct SplitSpec {
    double train_fraction = 0.2;
    std::uint64_t seed = 0;
    bool stratified = true;
};

// Stratified (or plain) split. Deterministic under a fixed seed; train and
// test partition the rows exactly. Throws DegenerateSplit when a class would
// end up with fewer than 2 training points or an empty test side.
std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec);

// Min-max scaling to [0, 1] fitted on one dataset and applied to others.
// Constant columns map to 0.
struct MinMaxScaler {
    Vector lo, hi;
    void fit(const Dataset& d);
    void apply(Dataset& d) const;
};

Dataset subsample(const Dataset& d, std::size_t max_rows, std::uint64_t seed);

}  // namespace gdrc
