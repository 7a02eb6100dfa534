#include "gdrc/moments.hpp"

#include <cmath>

namespace gdrc {

void MomentProfile::finalize() {
    const std::size_t n = dim();
    if (covariance.rows() != n || covariance.cols() != n)
        throw ShapeError("finalize: covariance shape mismatch");

    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += covariance(i, i);
    const double floor = std::max(1e-8 * trace / static_cast<double>(n), 1e-12);

    EigSym e = eig_sym(covariance, 1e-9);
    for (double& w : e.values) w = std::max(w, floor);

    eigvals = e.values;
    eigvecs = e.vectors;

    sqrt_factor = Matrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const double sw = std::sqrt(eigvals[c]);
        for (std::size_t i = 0; i < n; ++i) sqrt_factor(i, c) = eigvecs(i, c) * sw;
    }
    // Re-assemble the covariance from the floored spectrum so downstream
    // inverses agree with the stored factors exactly.
    Matrix cov(n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                cov(i, j) += eigvals[c] * eigvecs(i, c) * eigvecs(j, c);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (cov(i, j) + cov(j, i));
            cov(i, j) = v;
            cov(j, i) = v;
        }
    covariance = std::move(cov);
}

MomentProfile sample_moments(const std::vector<Vector>& points, double regularization) {
    if (points.size() < 2) throw InsufficientData("sample_moments: need at least 2 points");
    const std::size_t n = points.front().size();
    for (const Vector& p : points)
        if (p.size() != n) throw ShapeError("sample_moments: dimension mismatch");
    if (regularization < 0.0) throw RangeError("sample_moments: negative regularization");

    const double inv_count = 1.0 / static_cast<double>(points.size());
    MomentProfile profile;
    profile.sample_count = points.size();
    profile.mean.assign(n, 0.0);
    for (const Vector& p : points) kernels::axpy(inv_count, p.data(), profile.mean.data(), n);

    Matrix cov(n, n);
    Vector centered(n);
    for (const Vector& p : points) {
        for (std::size_t i = 0; i < n; ++i) centered[i] = p[i] - profile.mean[i];
        for (std::size_t i = 0; i < n; ++i)
            kernels::axpy(centered[i], centered.data(), cov.row(i), n);
    }
    cov.scale(1.0 / static_cast<double>(points.size() - 1));
    for (std::size_t i = 0; i < n; ++i) cov(i, i) += regularization;
    profile.covariance = std::move(cov);
    return profile;
}

SqrtSplit split_sqrt_factor(const MomentProfile& profile, std::size_t r) {
    const std::size_t n = profile.dim();
    if (profile.sqrt_factor.rows() != n) throw NumericalError("split_sqrt_factor: profile not finalized");
    if (r < 1 || r > n) throw RangeError("split_sqrt_factor: r outside [1, n]");
    SqrtSplit out;
    out.leading = profile.sqrt_factor.columns(0, r);
    out.trailing = profile.sqrt_factor.columns(r, n);
    return out;
}

Matrix covariance_sym_sqrt(const MomentProfile& profile) {
    const std::size_t n = profile.dim();
    if (profile.eigvals.size() != n) throw NumericalError("covariance_sym_sqrt: profile not finalized");
    Matrix root(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const double sw = std::sqrt(profile.eigvals[c]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                root(i, j) += sw * profile.eigvecs(i, c) * profile.eigvecs(j, c);
    }
    return root;
}

}  // namespace gdrc
