#include "gdrc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "gdrc/rng.hpp"

namespace gdrc {

void Dataset::rebuild_class_index() {
    class_index[0].clear();
    class_index[1].clear();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1)
            class_index[0].push_back(i);
        else if (labels[i] == -1)
            class_index[1].push_back(i);
        else
            throw LabelError("label must be +1 or -1");
    }
}

std::vector<Vector> Dataset::class_points(int k) const {
    std::vector<Vector> pts;
    pts.reserve(class_index[k].size());
    for (std::size_t i : class_index[k]) pts.push_back(row_vector(i));
    return pts;
}

Vector Dataset::row_vector(std::size_t i) const {
    Vector v(dim());
    for (std::size_t j = 0; j < dim(); ++j) v[j] = features(i, j);
    return v;
}

std::string Dataset::summary_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["n"] = dim();
    j["n_pos"] = count_positive();
    j["n_neg"] = count_negative();
    return j.dump();
}

void Dataset::require_two_classes() const {
    if (class_index[0].empty() || class_index[1].empty())
        throw DegenerateDataset("dataset '" + name + "' does not contain both classes");
}

namespace {

Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& rows, const std::string& suffix) {
    Dataset out;
    out.name = d.name + suffix;
    out.features = Matrix(rows.size(), d.dim());
    out.labels.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t j = 0; j < d.dim(); ++j) out.features(r, j) = d.features(rows[r], j);
        out.labels.push_back(d.labels[rows[r]]);
    }
    out.rebuild_class_index();
    return out;
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw ConfigError("train_fraction must lie in (0, 1)");
    dataset.require_two_classes();

    Rng rng(spec.seed);
    std::vector<std::size_t> train_rows, test_rows;

    auto pick = [&](std::vector<std::size_t> rows) {
        rng.shuffle(rows);
        const auto want = static_cast<std::size_t>(
            std::llround(spec.train_fraction * static_cast<double>(rows.size())));
        if (want < 2 || want >= rows.size())
            throw DegenerateSplit("split leaves a class without enough train or test points");
        train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + want);
        test_rows.insert(test_rows.end(), rows.begin() + want, rows.end());
    };

    if (spec.stratified) {
        pick(dataset.class_index[0]);
        pick(dataset.class_index[1]);
    } else {
        std::vector<std::size_t> all(dataset.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        pick(std::move(all));
    }

    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    auto train = take_rows(dataset, train_rows, "/train");
    auto test = take_rows(dataset, test_rows, "/test");
    train.require_two_classes();
    return {std::move(train), std::move(test)};
}

void MinMaxScaler::fit(const Dataset& d) {
    const std::size_t n = d.dim();
    lo.assign(n, std::numeric_limits<double>::infinity());
    hi.assign(n, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            lo[j] = std::min(lo[j], d.features(i, j));
            hi[j] = std::max(hi[j], d.features(i, j));
        }
}

void MinMaxScaler::apply(Dataset& d) const {
    if (lo.size() != d.dim()) throw ShapeError("scaler dimension mismatch");
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.dim(); ++j) {
            const double span = hi[j] - lo[j];
            d.features(i, j) = span > 0.0 ? (d.features(i, j) - lo[j]) / span : 0.0;
        }
}

Dataset subsample(const Dataset& d, std::size_t max_rows, std::uint64_t seed) {
    if (d.size() <= max_rows) return d;
    Rng rng(seed);
    std::vector<std::size_t> rows(d.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    rng.shuffle(rows);
    rows.resize(max_rows);
    std::sort(rows.begin(), rows.end());
    Dataset out;
    out.name = d.name;
    out.features = Matrix(rows.size(), d.dim());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t j = 0; j < d.dim(); ++j) out.features(r, j) = d.features(rows[r], j);
        out.labels.push_back(d.labels[rows[r]]);
    }
    out.rebuild_class_index();
    return out;
}

}  // namespace gdrc
