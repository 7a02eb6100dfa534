#pragma once

#include <cstddef>
#include <utility>

#include "gdrc/linalg.hpp"

namespace gdrc {

// Per-class first and second moments with the spectral data the model
// builders need. mean/covariance are filled by sample_moments; the spectral
// fields by finalize(). Immutable in practice: treat as a value.
struct MomentProfile {
    Vector mean;
    Matrix covariance;   // symmetric PD after finalize()
    Matrix sqrt_factor;  // S = U diag(sqrt(eigvals)), so S S^T = covariance
    Matrix eigvecs;      // orthogonal, columns ordered with eigvals
    Vector eigvals;      // descending, floored strictly above zero
    double gamma1 = 0.1;
    double gamma2 = 1.2;
    std::size_t sample_count = 0;

    std::size_t dim() const { return mean.size(); }

    // Eigendecomposition of the covariance with a relative diagonal floor of
    // 1e-8 * trace / n, applied to both the eigenvalues and the stored
    // covariance so that inverses and square roots exist.
    void finalize();
};

// Arithmetic mean and unbiased (N-1 divisor) sample covariance, plus
// regularization * I on the diagonal. Requires >= 2 points of equal
// dimension; throws InsufficientData / ShapeError otherwise.
MomentProfile sample_moments(const std::vector<Vector>& points, double regularization);

// Leading/trailing split of the scaled eigenvector factor: first r columns of
// S and the remaining n-r columns. S_r S_r^T + S_tail S_tail^T = covariance.
// r must lie in [1, n].
struct SqrtSplit {
    Matrix leading;   // n x r
    Matrix trailing;  // n x (n-r)
};
SqrtSplit split_sqrt_factor(const MomentProfile& profile, std::size_t r);

// Symmetric PSD square root of the (finalized) covariance.
Matrix covariance_sym_sqrt(const MomentProfile& profile);

}  // namespace gdrc
