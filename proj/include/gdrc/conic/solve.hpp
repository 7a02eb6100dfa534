#pragma once

#include <memory>

#include "gdrc/conic/program.hpp"
#include "gdrc/conic/solution.hpp"

namespace gdrc::conic {

struct SolverOptions {
    double tolerance = 1e-8;
    int max_iterations = 120;
    bool verbose = false;
};

// Backend contract: any conic solver over {linear, SOC, PSD} cones that
// fills residuals honestly. Optimal means the reported residuals meet the
// requested tolerance up to a small documented factor (feasibility within
// 10x, relative gap within 100x in the stalled-endgame fallback); callers
// that need exact thresholds check Solution::residuals, and independent
// re-evaluation is available through validate().
class Backend {
public:
    virtual ~Backend() = default;
    virtual Solution solve(const Program& p, const SolverOptions& opts) = 0;
    virtual const char* name() const = 0;
};

// Primary backend: dense Nesterov-Todd scaled primal-dual predictor-corrector
// interior-point method.
std::unique_ptr<Backend> make_ipm_backend();

// Reference backend: primal log-barrier path following (phase-1 + SUMT).
// Slow and dense; intended for cross-checking the primary backend on
// problems with total PSD dimension <= 30.
std::unique_ptr<Backend> make_barrier_backend();

// Convenience: primary backend, default options.
Solution solve(const Program& p, double tolerance = 1e-8);

}  // namespace gdrc::conic
