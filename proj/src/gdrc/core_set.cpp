#include "gdrc/core_set.hpp"

#include <algorithm>
#include <cmath>

#include "gdrc/linalg.hpp"

namespace gdrc {

namespace {

// Gauss-Jordan inverse with partial pivoting.
Matrix general_inverse(const Matrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw ShapeError("inverse: matrix not square");
    Matrix w = a;
    Matrix inv = Matrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t best = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(w(i, k)) > std::abs(w(best, k))) best = i;
        if (std::abs(w(best, k)) < 1e-300) throw NumericalError("inverse: singular matrix");
        if (best != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w(k, j), w(best, j));
                std::swap(inv(k, j), inv(best, j));
            }
        const double piv = 1.0 / w(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            w(k, j) *= piv;
            inv(k, j) *= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const double f = w(i, k);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                w(i, j) -= f * w(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

}  // namespace

double CoreSet::membership_stat(const Vector& x) const {
    if (x.size() != dim()) throw ShapeError("membership_stat dimension mismatch");
    Vector diff(dim());
    for (std::size_t i = 0; i < dim(); ++i) diff[i] = x[i] - center[i];
    const Vector z = inv_perturbation * diff;
    const double nz = norm_value(z, norm_order);
    return nz * nz;
}

CoreSet make_core_set(Vector center, Matrix perturbation, double radius_sq, NormOrder p,
                      double attention) {
    CoreSet y;
    y.center = std::move(center);
    y.inv_perturbation = general_inverse(perturbation);
    // Frobenius-based condition estimate; an exact condition number is not
    // needed to reject a numerically useless perturbation.
    const double cond =
        perturbation.frobenius_norm() * y.inv_perturbation.frobenius_norm();
    if (!(cond < 1e12)) throw NumericalError("core set perturbation is near singular");
    y.perturbation = std::move(perturbation);
    y.radius_sq = radius_sq;
    y.norm_order = p;
    y.attention = attention;
    return y;
}

void AmbiguityConfig::check() const {
    if (!(lambda >= 0.0 && lambda < 0.5))
        throw ConfigError("lambda must lie in [0, 0.5)");
    if (!(containment_fraction > 0.0 && containment_fraction <= 1.0))
        throw ConfigError("containment_fraction must lie in (0, 1]");
    if (gamma1 < 0.0) throw ConfigError("gamma1 must be nonnegative");
    if (gamma2 < 1.0) throw ConfigError("gamma2 must be at least 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (theta < 0.0) throw ConfigError("theta must be nonnegative");
    if (m_per_class == 0) throw ConfigError("m_per_class must be positive");
    if (radius_policy == RadiusPolicy::MeanScaled) {
        if (radius_mean_scale < 1.0)
            throw ConfigError("radius_mean_scale must be at least 1");
        if (lambda <= 0.0)
            throw ConfigError("mean_scaled radii need lambda > 0");
    }
}

CoreSets build_core_sets(const MomentProfile& profile_pos, const MomentProfile& profile_neg,
                         const Dataset& train, const AmbiguityConfig& config) {
    config.check();
    train.require_two_classes();
    const std::size_t n = profile_pos.dim();
    if (profile_neg.dim() != n || train.dim() != n)
        throw ShapeError("build_core_sets dimension mismatch");

    const MomentProfile* profiles[2] = {&profile_pos, &profile_neg};
    CoreSets out;

    for (int k = 0; k < 2; ++k) {
        const Vector& mu_own = profiles[k]->mean;
        const Vector& mu_other = profiles[1 - k]->mean;
        const Matrix a = covariance_sym_sqrt(*profiles[k]);
        const auto points = train.class_points(k);
        const std::size_t want =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(
                                         config.containment_fraction * points.size())));

        for (std::size_t j = 1; j <= config.m_per_class; ++j) {
            const double lam =
                config.lambda * static_cast<double>(j) / static_cast<double>(config.m_per_class);
            Vector center(n);
            for (std::size_t i = 0; i < n; ++i)
                center[i] = (1.0 - lam) * mu_own[i] + lam * mu_other[i];

            CoreSet y = make_core_set(center, a, 0.0, config.p_norm, config.theta);

            const double mean_stat = y.membership_stat(mu_own);
            if (config.radius_policy == RadiusPolicy::MeanScaled) {
                y.radius_sq = config.radius_mean_scale * mean_stat;
            } else {
                // Smallest radius containing `want` training points and the mean.
                std::vector<double> stats;
                stats.reserve(points.size());
                for (const Vector& p : points) stats.push_back(y.membership_stat(p));
                std::nth_element(stats.begin(), stats.begin() + (want - 1), stats.end());
                y.radius_sq = std::max(stats[want - 1], mean_stat);
            }
            if (y.radius_sq <= 0.0) y.radius_sq = 1e-12;  // degenerate zero-spread data
            out.per_class[k].push_back(std::move(y));
        }
    }
    return out;
}

double support_function(const CoreSet& y, const Vector& v) {
    if (v.size() != y.dim()) throw ShapeError("support_function dimension mismatch");
    const Vector atv = y.perturbation.transposed() * v;
    return dot(y.center, v) +
           std::sqrt(y.radius_sq) * norm_value(atv, dual_order(y.norm_order));
}

bool biconjugate_bound(const CoreSet& y, double r_scale, const Vector& v) {
    if (v.size() != y.dim()) throw ShapeError("biconjugate_bound dimension mismatch");
    return norm_value(v, dual_order(y.norm_order)) <= r_scale * y.attention;
}

}  // namespace gdrc
