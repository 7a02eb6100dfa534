#pragma once

#include <string>
#include <vector>

#include "gdrc/conic/program.hpp"
#include "gdrc/conic/solution.hpp"

namespace gdrc::conic {

// Independent constraint re-evaluation. Never reads solver residuals: every
// margin below is recomputed from the primal values in the solution.
//
// Margin conventions (>= 0 means satisfied):
//   LinEq: -|expr|, LinIneq: expr, Soc/NormCap: bound - ||arg||,
//   Psd: min eigenvalue of the assembled matrix.
struct ConstraintCheck {
    std::string label;
    ConstraintKind kind;
    double margin;
};

struct ValidationReport {
    std::vector<ConstraintCheck> checks;
    double worst_eq = 0.0;       // most negative equality margin
    double worst_ineq = 0.0;
    double worst_soc = 0.0;
    double worst_cap = 0.0;
    double worst_psd_eig = 0.0;  // most negative min eigenvalue
    bool passed = false;
    double tolerance = 0.0;

    std::string to_string() const;
};

ValidationReport validate(const Program& p, const Solution& s, double tol);

}  // namespace gdrc::conic
