#include <cmath>

#include "gdrc/models.hpp"

namespace gdrc::models {

namespace detail {

Vector column_mean(const Dataset& d) {
    Vector g(d.dim(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.dim(); ++j) g[j] += d.features(i, j);
    const double inv = 1.0 / static_cast<double>(d.size());
    for (double& v : g) v *= inv;
    return g;
}

// t_obj >= ||w||^2 through the rotated-cone identity
// ||(w, (t-1)/2)||_2 <= (t+1)/2.
void add_objective_epigraph(conic::Program& p, conic::BlockId w, std::size_t n,
                            conic::BlockId t_obj) {
    std::vector<conic::LinExpr> arg;
    arg.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) arg.push_back(p.v(w, i));
    arg.push_back(p.v(t_obj) * 0.5 - 0.5);
    p.add_soc(std::move(arg), p.v(t_obj) * 0.5 + 0.5, "objective.epigraph");
}

}  // namespace detail

namespace {

// Common scaffold of the per-sample models: w, b, per-sample slacks, and the
// quadratic objective epigraph, over globally centered features.
struct SampleModel {
    CompiledModel m;
    conic::BlockId w, b, t_obj, xi;
    std::size_t n = 0;
};

SampleModel sample_scaffold(const Dataset& train, double C, ModelKind kind) {
    train.require_two_classes();
    SampleModel s;
    s.n = train.dim();
    s.m.kind = kind;
    s.m.dim = s.n;
    s.m.C = C;
    s.m.sample_count = train.size();
    s.m.centering = detail::column_mean(train);

    conic::Program& p = s.m.program;
    s.w = p.add_vector("w", s.n);
    s.b = p.add_scalar("b");
    s.t_obj = p.add_scalar("t_obj");
    s.xi = p.add_vector("xi", train.size());

    conic::LinExpr obj = p.v(s.t_obj) * 0.5;
    for (std::size_t i = 0; i < train.size(); ++i) obj += p.v(s.xi, i) * C;
    p.set_objective(obj);
    detail::add_objective_epigraph(p, s.w, s.n, s.t_obj);

    for (std::size_t i = 0; i < train.size(); ++i)
        p.add_ineq(p.v(s.xi, i), "slack.nonneg[" + std::to_string(i) + "]");
    return s;
}

conic::LinExpr margin_expr(const conic::Program& p, const SampleModel& s, const Dataset& train,
                           const Vector& g, std::size_t i) {
    const double y = train.labels[i];
    conic::LinExpr e;
    for (std::size_t j = 0; j < s.n; ++j) e += p.v(s.w, j) * (y * (train.features(i, j) - g[j]));
    e += p.v(s.b) * y;
    e += p.v(s.xi, i);
    e += -1.0;
    return e;  // y(w^T x + b) - 1 + xi_i
}

CompiledModel build_chebyshev(const Dataset& train, double C, double epsilon, double cov_scale,
                              double nu, ModelKind kind) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (cov_scale < 0.0) throw ConfigError("cov_scale must be nonnegative");
    SampleModel s = sample_scaffold(train, C, kind);
    s.m.epsilon = epsilon;
    conic::Program& p = s.m.program;

    const double kappa = std::sqrt((1.0 - epsilon) / epsilon);
    const double coef = (kappa + nu) * std::sqrt(cov_scale);

    // Per-class robust margin vector coef * S_k^T w (same for every sample of
    // the class; the lowering shares the epigraph across identical vectors).
    Matrix st[2];
    for (int k = 0; k < 2; ++k) {
        MomentProfile prof = sample_moments(train.class_points(k), 0.0);
        prof.finalize();
        st[k] = prof.sqrt_factor.transposed();
    }

    for (std::size_t i = 0; i < train.size(); ++i) {
        const int k = train.labels[i] == 1 ? 0 : 1;
        std::vector<conic::LinExpr> arg(s.n);
        for (std::size_t r = 0; r < s.n; ++r)
            for (std::size_t c = 0; c < s.n; ++c)
                arg[r] += p.v(s.w, c) * (coef * st[k](r, c));
        p.add_soc(std::move(arg), margin_expr(p, s, train, s.m.centering, i),
                  "robust_margin[" + std::to_string(i) + "]");
    }
    return std::move(s.m);
}

}  // namespace

CompiledModel build_svm(const Dataset& train, double C) {
    if (!(C > 0.0)) throw ConfigError("C must be positive");
    SampleModel s = sample_scaffold(train, C, ModelKind::Svm);
    conic::Program& p = s.m.program;
    for (std::size_t i = 0; i < train.size(); ++i)
        p.add_ineq(margin_expr(p, s, train, s.m.centering, i),
                   "margin[" + std::to_string(i) + "]");
    return std::move(s.m);
}

CompiledModel build_drc(const Dataset& train, double C, double epsilon, double cov_scale) {
    return build_chebyshev(train, C, epsilon, cov_scale, 0.0, ModelKind::Drc);
}

CompiledModel build_drc_mu(const Dataset& train, double C, double epsilon, double cov_scale,
                           double nu_sq) {
    if (nu_sq < 0.0) throw ConfigError("nu_sq must be nonnegative");
    return build_chebyshev(train, C, epsilon, cov_scale, std::sqrt(nu_sq), ModelKind::DrcMu);
}

}  // namespace gdrc::models
