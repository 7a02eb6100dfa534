#include "gdrc/conic/solution.hpp"

#include <cmath>

namespace gdrc::conic {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488016887242097;
}

const char* status_name(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        default: return "numerical_trouble";
    }
}

double Solution::scalar(const std::string& block) const {
    const auto it = values.find(block);
    if (it == values.end() || it->second.empty()) throw Error("no value for block '" + block + "'");
    return it->second.front();
}

const Vector& Solution::vector(const std::string& block) const {
    const auto it = values.find(block);
    if (it == values.end()) throw Error("no value for block '" + block + "'");
    return it->second;
}

Matrix Solution::sym_matrix(const std::string& block) const {
    const Vector& sv = vector(block);
    // scalar_count = d(d+1)/2
    std::size_t d = 0;
    while (d * (d + 1) / 2 < sv.size()) ++d;
    if (d * (d + 1) / 2 != sv.size()) throw ShapeError("svec length is not triangular");
    Matrix m(d, d);
    std::size_t k = 0;
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i <= j; ++i, ++k) {
            const double v = (i == j) ? sv[k] : sv[k] / kSqrt2;
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

Vector Solution::flat(const Program& p) const {
    Vector x(p.num_scalars(), 0.0);
    for (const auto& b : p.blocks()) {
        const auto it = values.find(b.name);
        if (it == values.end()) throw Error("solution is missing block '" + b.name + "'");
        if (it->second.size() != b.scalar_count)
            throw ShapeError("solution block '" + b.name + "' has wrong size");
        for (std::size_t i = 0; i < b.scalar_count; ++i) x[b.offset + i] = it->second[i];
    }
    return x;
}

}  // namespace gdrc::conic
