#pragma once

#include <optional>
#include <string>

#include "gdrc/conic/solve.hpp"
#include "gdrc/conic/validate.hpp"
#include "gdrc/core_set.hpp"
#include "gdrc/dataset.hpp"
#include "gdrc/moments.hpp"

namespace gdrc::models {

enum class ModelKind { Svm, Drc, DrcMu, Gdrc, GdrcApp };

const char* model_name(ModelKind k);

// Dual certificate blocks of the GDRC / GDRC-app chance-constraint
// reformulation, per class (index 0: label +1, 1: label -1). Values are
// reported in the globally centered coordinates the program was assembled in
// (w is unaffected; v/u are translation invariant).
struct Certificate {
    Matrix lambda_mat[2];            // n x n (full) or r x r (approximation)
    Vector q[2];
    double t[2] = {0, 0};
    double r[2] = {0, 0};
    double tau[2] = {0, 0};
    std::vector<Vector> v[2];        // one per core set
    std::vector<Vector> u[2];
};

struct TrainedClassifier {
    Vector w;
    double b = 0.0;
    Vector xi;          // per class (2 entries) for GDRC, per sample otherwise
    double C = 16.0;
    double epsilon = 0.05;
    double objective = 0.0;
    ModelKind kind = ModelKind::Svm;
    std::size_t app_rank = 0;  // GdrcApp only
    std::optional<Certificate> certificate;

    // sign(w^T x + b); a point exactly on the hyperplane is classified -1.
    int predict(const Vector& x) const;

    std::string to_json() const;
    static TrainedClassifier from_json(const std::string& text);
};

// A model compiled to a conic program plus the bookkeeping needed to decode
// a solution back into classifier coordinates. Data is centered by a global
// mean shift before assembly; decode() maps b back.
struct CompiledModel {
    conic::Program program;
    ModelKind kind = ModelKind::Svm;
    Vector centering;      // g: model built over x - g
    std::size_t dim = 0;
    std::size_t rank = 0;  // GdrcApp
    std::size_t m_per_class = 1;
    std::size_t sample_count = 0;  // per-sample slack layout (SVM/DRC)
    double C = 0.0;
    double epsilon = 0.0;

    TrainedClassifier decode(const conic::Solution& sol) const;
};

// Soft-margin SVM; the quadratic objective enters through an SOC epigraph.
CompiledModel build_svm(const Dataset& train, double C);

// Per-sample distributionally robust baseline with known moments
// (multivariate Chebyshev margin kappa(eps) = sqrt((1-eps)/eps), sample
// covariance scaled by cov_scale).
CompiledModel build_drc(const Dataset& train, double C, double epsilon, double cov_scale);

// DRC with an additional mean-perturbation ellipsoid of squared radius
// nu_sq (see drc_mean_radius), tightening the margin by nu * ||Sigma^{1/2} w||.
CompiledModel build_drc_mu(const Dataset& train, double C, double epsilon, double cov_scale,
                           double nu_sq);

// Globalized DRC chance-constrained SVM: one chance constraint per class,
// compiled to linear matrix inequalities over the moment and core-set
// ambiguity ingredients. Requires mu_k inside every core set of class k
// (throws AssumptionViolated otherwise).
CompiledModel build_gdrc(const MomentProfile& profile_pos, const MomentProfile& profile_neg,
                         const CoreSets& core_sets, double C, double epsilon);

// Rank-r principal-component approximation of build_gdrc: class-k moment
// blocks shrink to r x r, borders project through the leading scaled
// eigenvector factor S_k^{(r)}.
CompiledModel build_gdrc_app(const MomentProfile& profile_pos, const MomentProfile& profile_neg,
                             const CoreSets& core_sets, double C, double epsilon,
                             std::size_t rank);

// Upper bound on v*(n) - v*(r) from an optimal GDRC-app(r) solution:
//   (C/2) sum_{k,j} ( ||S_k^{(n-r)T}(y_k w + v_kj)||_2 + ||S_k^{(n-r)T} u_kj||_2 ).
// Throws CertificateRequired when the classifier has no certificate.
double gap_bound(const TrainedClassifier& classifier, const MomentProfile& profile_pos,
                 const MomentProfile& profile_neg, double C);

struct TrainResult {
    TrainedClassifier classifier;
    conic::Solution solution;
    conic::ValidationReport validation;
};

// Solve + decode + independent validation (at 1e-6) in one call. The
// validation report is always filled for Optimal solves; non-Optimal solves
// leave the classifier empty.
TrainResult train(const CompiledModel& model, double tolerance = 1e-8);

}  // namespace gdrc::models
