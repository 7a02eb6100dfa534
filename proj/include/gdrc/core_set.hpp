#pragma once

#include <array>
#include <vector>

#include "gdrc/dataset.hpp"
#include "gdrc/moments.hpp"
#include "gdrc/norms.hpp"

namespace gdrc {

// Norm-ball image region near the anticipated separating hyperplane:
//   Y = { center + A z : ||z||_p <= sqrt(radius_sq) }.
// For invertible A, membership is ||A^{-1}(x - center)||_p^2 <= radius_sq.
struct CoreSet {
    Vector center;
    Matrix perturbation;      // A
    Matrix inv_perturbation;  // A^{-1}
    double radius_sq = 0.0;   // squared radius bound on the primitive z
    NormOrder norm_order = NormOrder::Two;
    double attention = 0.0;   // theta

    std::size_t dim() const { return center.size(); }

    // Squared membership statistic ||A^{-1}(x - center)||_p^2.
    double membership_stat(const Vector& x) const;
    bool contains(const Vector& x) const { return membership_stat(x) <= radius_sq; }
};

// Builds a core set from center and perturbation, computing the inverse and
// rejecting nearly singular perturbations (condition estimate above 1e12).
CoreSet make_core_set(Vector center, Matrix perturbation, double radius_sq, NormOrder p,
                      double attention);

// Radius calibration rule. Containment is the smallest radius holding a
// fraction of each class's training points plus the class mean; it is only
// sensible in low dimension, where the point order statistics stay O(1).
// MeanScaled sets radius_sq = radius_mean_scale * (mean membership stat),
// which keeps the core sets separable in higher dimensions and still
// contains the class mean by construction (requires lambda > 0).
enum class RadiusPolicy { Containment, MeanScaled };

struct AmbiguityConfig {
    double lambda = 0.0;               // center interpolation in [0, 0.5)
    double theta = 400.0;              // attention weight
    double containment_fraction = 0.1; // share of training points each core set must contain
    double gamma1 = 0.1;               // mean confidence radius
    double gamma2 = 1.2;               // covariance dominance factor, >= 1
    double epsilon = 0.05;             // risk level in (0, 1)
    NormOrder p_norm = NormOrder::Two;
    std::size_t m_per_class = 1;
    RadiusPolicy radius_policy = RadiusPolicy::Containment;
    double radius_mean_scale = 1.1;    // MeanScaled only, >= 1

    void check() const;  // throws ConfigError on violations
};

struct CoreSets {
    std::array<std::vector<CoreSet>, 2> per_class;
};

// Core-set construction: centers interpolate the class means toward the
// opposite class (lambda = 0 keeps the class means), the perturbation is the
// symmetric covariance square root, and each radius is the smallest value
// containing ceil(containment_fraction * N_k) training points of the class
// and the class mean. With m_per_class > 1 the sets use evenly spaced
// interpolation parameters lambda * j / m, j = 1..m, each calibrated the
// same way so the mean-containment assumption holds for every set.
CoreSets build_core_sets(const MomentProfile& profile_pos, const MomentProfile& profile_neg,
                         const Dataset& train, const AmbiguityConfig& config);

// Support function delta*(v | Y) = center^T v + sqrt(radius_sq) ||A^T v||_q,
// q the dual order of the core set's p.
double support_function(const CoreSet& y, const Vector& v);

// Feasibility of the biconjugate side constraint: ||v||_q <= r_scale * theta.
bool biconjugate_bound(const CoreSet& y, double r_scale, const Vector& v);

}  // namespace gdrc
