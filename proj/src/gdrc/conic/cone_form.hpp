#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gdrc/conic/program.hpp"

// Internal lowered form consumed by the solvers. Not installed.
namespace gdrc::conic::detail {

// a^T x + b0 over the compressed variable space.
struct SparseRow {
    std::vector<std::pair<std::uint32_t, double>> a;
    double b0 = 0.0;

    double eval(const Vector& x) const {
        double v = b0;
        for (const auto& [i, c] : a) v += c * x[i];
        return v;
    }
};

// Contribution of one variable to a PSD block: coef at (r, c) and, when
// r != c, symmetrically at (c, r).
struct TriEntry {
    std::uint16_t r, c;
    double coef;
};

struct PsdBlockData {
    std::size_t dim = 0;
    Matrix m0;
    // Sorted by variable index; each variable's entries are upper-triangle.
    std::vector<std::pair<std::uint32_t, std::vector<TriEntry>>> vars;
};

struct ConeForm {
    std::size_t nvars = 0;   // compressed (free) variables
    Vector cost;
    double cost_offset = 0.0;

    std::vector<SparseRow> diag;       // each row >= 0
    std::vector<PsdBlockData> psd;

    bool trivially_infeasible = false;
    std::string infeasible_reason;

    // Eliminated variables: extended index -> affine form over compressed
    // variables, applied in order after solving.
    struct Recon {
        std::uint32_t ext_index;
        SparseRow expr;
    };
    std::vector<Recon> recon;

    // compressed index -> extended index (extended = program scalars followed
    // by lowering auxiliaries).
    std::vector<std::uint32_t> kept;
    std::size_t ext_vars = 0;

    // Expands a compressed solution vector to the full extended space.
    Vector expand(const Vector& x_compressed) const;
};

ConeForm lower(const Program& p);

}  // namespace gdrc::conic::detail
