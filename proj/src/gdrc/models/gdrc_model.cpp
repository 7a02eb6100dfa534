#include <cmath>

#include "gdrc/models.hpp"

namespace gdrc::models {

namespace detail {
void add_objective_epigraph(conic::Program& p, conic::BlockId w, std::size_t n,
                            conic::BlockId t_obj);
}

namespace {

std::string tag(const char* base, int k, std::size_t j) {
    return std::string(base) + "[" + std::to_string(k) + "," + std::to_string(j) + "]";
}
std::string tag(const char* base, int k) {
    return std::string(base) + "[" + std::to_string(k) + "]";
}

// Shared assembly of the full model and its rank-r approximation; the full
// model is the rank == n case with untransformed borders and the mean terms
// folded into the support corner.
CompiledModel build(const MomentProfile& profile_pos, const MomentProfile& profile_neg,
                    const CoreSets& core_sets, double C, double epsilon, std::size_t rank,
                    bool app) {
    if (!(C > 0.0)) throw ConfigError("C must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    const std::size_t n = profile_pos.dim();
    if (profile_neg.dim() != n) throw ShapeError("profile dimension mismatch");
    if (app && (rank < 1 || rank > n)) throw RangeError("rank outside [1, n]");
    const std::size_t d = app ? rank : n;

    const MomentProfile* prof[2] = {&profile_pos, &profile_neg};
    for (int k = 0; k < 2; ++k) {
        if (core_sets.per_class[k].empty()) throw ConfigError("missing core sets");
        for (const CoreSet& y : core_sets.per_class[k]) {
            if (y.dim() != n) throw ShapeError("core set dimension mismatch");
            if (y.membership_stat(prof[k]->mean) > y.radius_sq * (1.0 + 1e-9))
                throw AssumptionViolated("class mean lies outside a core set");
        }
    }

    CompiledModel m;
    m.kind = app ? ModelKind::GdrcApp : ModelKind::Gdrc;
    m.dim = n;
    m.rank = app ? rank : 0;
    m.m_per_class = core_sets.per_class[0].size();
    m.C = C;
    m.epsilon = epsilon;

    // Global mean shift keeps the mu mu^T moment terms well conditioned.
    const double n_pos = static_cast<double>(profile_pos.sample_count);
    const double n_neg = static_cast<double>(profile_neg.sample_count);
    m.centering.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        m.centering[i] =
            (n_pos * profile_pos.mean[i] + n_neg * profile_neg.mean[i]) / (n_pos + n_neg);

    conic::Program& p = m.program;
    const auto w = p.add_vector("w", n);
    const auto b = p.add_scalar("b");
    const auto t_obj = p.add_scalar("t_obj");
    const auto xi = p.add_vector("xi", 2);

    conic::LinExpr obj = p.v(t_obj) * 0.5 + p.v(xi, 0) * C + p.v(xi, 1) * C;
    p.set_objective(obj);
    detail::add_objective_epigraph(p, w, n, t_obj);
    p.add_ineq(p.v(xi, 0), "slack.nonneg[0]");
    p.add_ineq(p.v(xi, 1), "slack.nonneg[1]");

    for (int k = 0; k < 2; ++k) {
        const double y = k == 0 ? 1.0 : -1.0;
        const MomentProfile& pk = *prof[k];
        Vector mu_c(n);  // centered class mean
        for (std::size_t i = 0; i < n; ++i) mu_c[i] = pk.mean[i] - m.centering[i];

        const auto lam = p.add_sym_matrix(tag("Lam", k), d);
        const auto q = p.add_vector(tag("q", k), d);
        const auto t = p.add_scalar(tag("t", k));
        const auto r = p.add_scalar(tag("r", k));
        const auto tau = p.add_scalar(tag("tau", k));
        const auto s_mom = p.add_scalar(tag("s_mom", k));

        p.add_ineq(p.v(r), tag("dual_scale.nonneg", k));
        p.add_ineq(p.v(tau), tag("farkas.nonneg", k));

        // Scalar moment inequality: the chance constraint's first row.
        {
            conic::LinExpr row = p.v(tau) * epsilon - p.v(t) - p.v(r) -
                                 p.v(s_mom) * std::sqrt(pk.gamma1);
            if (app) {
                row -= p.trace(lam) * pk.gamma2;
            } else {
                Matrix weight = pk.covariance;
                weight.scale(pk.gamma2);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t jj = 0; jj < n; ++jj)
                        weight(i, jj) += mu_c[i] * mu_c[jj];
                row -= p.frob_inner(lam, weight);
                for (std::size_t i = 0; i < n; ++i) row -= p.v(q, i) * mu_c[i];
            }
            p.add_ineq(std::move(row), tag("moment", k));
        }

        // Epigraph of the mean-confidence norm term.
        {
            std::vector<conic::LinExpr> arg;
            if (app) {
                arg.reserve(d);
                for (std::size_t i = 0; i < d; ++i) arg.push_back(p.v(q, i));
            } else {
                // rows of S^T (q + 2 Lam mu)
                std::vector<conic::LinExpr> h(n);
                for (std::size_t c = 0; c < n; ++c) {
                    h[c] = p.v(q, c) + p.mat_vec_entry(lam, mu_c, c) * 2.0;
                }
                arg.assign(n, {});
                const Matrix& s = pk.sqrt_factor;  // S = U D^{1/2}, use S^T rows
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t c = 0; c < n; ++c) {
                        if (s(c, i) != 0.0) arg[i] += h[c] * s(c, i);
                    }
            }
            p.add_soc(std::move(arg), p.v(s_mom), tag("moment.norm", k));
        }

        // Lam PSD.
        {
            std::vector<std::vector<conic::LinExpr>> grid(d, std::vector<conic::LinExpr>(d));
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t jj = i; jj < d; ++jj) grid[i][jj] = p.mat_entry(lam, i, jj);
            p.add_psd_block(std::move(grid), tag("dual_moment.psd", k));
        }

        const Matrix s_lead = app ? split_sqrt_factor(pk, rank).leading : Matrix();

        for (std::size_t j = 0; j < core_sets.per_class[k].size(); ++j) {
            const CoreSet& ys = core_sets.per_class[k][j];
            const double root_radius = std::sqrt(ys.radius_sq);
            const NormOrder qo = dual_order(ys.norm_order);

            const auto v = p.add_vector(tag("v", k, j), n);
            const auto u = p.add_vector(tag("u", k, j), n);
            const auto s_v = p.add_scalar(tag("s_v", k, j));
            const auto s_u = p.add_scalar(tag("s_u", k, j));

            Vector center_c(n);  // centered core-set center
            for (std::size_t i = 0; i < n; ++i) center_c[i] = ys.center[i] - m.centering[i];

            // Support-function epigraphs s_v >= ||A^T v||_q, s_u >= ||A^T u||_q.
            for (const auto& [block, epi, name] :
                 {std::tuple{v, s_v, "support.v"}, std::tuple{u, s_u, "support.u"}}) {
                std::vector<conic::LinExpr> arg(n);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t c = 0; c < n; ++c) {
                        const double coef = ys.perturbation(c, i);  // (A^T)_{i c}
                        if (coef != 0.0) arg[i] += p.v(block, c) * coef;
                    }
                p.add_norm_cap(qo, std::move(arg), p.v(epi), tag(name, k, j));
            }

            // Dual-norm caps ||v||_q <= r theta, ||u||_q <= r theta.
            for (const auto& [block, name] : {std::tuple{v, "cap.v"}, std::tuple{u, "cap.u"}}) {
                std::vector<conic::LinExpr> arg;
                arg.reserve(n);
                for (std::size_t i = 0; i < n; ++i) arg.push_back(p.v(block, i));
                p.add_norm_cap(qo, std::move(arg), p.v(r) * ys.attention, tag(name, k, j));
            }

            // Bordered LMIs. grid[i][jj] upper triangle only.
            auto lam_grid = [&] {
                std::vector<std::vector<conic::LinExpr>> grid(d + 1,
                                                              std::vector<conic::LinExpr>(d + 1));
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t jj = i; jj < d; ++jj) grid[i][jj] = p.mat_entry(lam, i, jj);
                return grid;
            };

            // First LMI: hyperplane side.
            {
                auto grid = lam_grid();
                for (std::size_t i = 0; i < d; ++i) {
                    conic::LinExpr border = p.v(q, i);
                    if (app) {
                        for (std::size_t c = 0; c < n; ++c) {
                            const double coef = s_lead(c, i);  // (S^{(r)T})_{i c}
                            if (coef != 0.0) border += (p.v(w, c) * y + p.v(v, c)) * coef;
                        }
                    } else {
                        border += p.v(v, i) + p.v(w, i) * y;
                    }
                    grid[i][d] = border * 0.5;
                }
                conic::LinExpr corner = p.v(t) - p.v(tau) + p.v(b) * y + p.v(xi, k) - 1.0 -
                                        p.v(s_v) * root_radius;
                if (app) {
                    for (std::size_t i = 0; i < n; ++i) {
                        corner += p.v(w, i) * (y * mu_c[i]);
                        corner -= p.v(v, i) * (ys.center[i] - pk.mean[i]);
                    }
                } else {
                    for (std::size_t i = 0; i < n; ++i) corner -= p.v(v, i) * center_c[i];
                }
                grid[d][d] = std::move(corner);
                p.add_psd_block(std::move(grid), tag("lmi.margin", k, j));
            }

            // Second LMI: sample-space side.
            {
                auto grid = lam_grid();
                for (std::size_t i = 0; i < d; ++i) {
                    conic::LinExpr border = p.v(q, i);
                    if (app) {
                        for (std::size_t c = 0; c < n; ++c) {
                            const double coef = s_lead(c, i);
                            if (coef != 0.0) border += p.v(u, c) * coef;
                        }
                    } else {
                        border += p.v(u, i);
                    }
                    grid[i][d] = border * 0.5;
                }
                conic::LinExpr corner = p.v(t) - p.v(s_u) * root_radius;
                if (app) {
                    for (std::size_t i = 0; i < n; ++i)
                        corner -= p.v(u, i) * (ys.center[i] - pk.mean[i]);
                } else {
                    for (std::size_t i = 0; i < n; ++i) corner -= p.v(u, i) * center_c[i];
                }
                grid[d][d] = std::move(corner);
                p.add_psd_block(std::move(grid), tag("lmi.ambient", k, j));
            }
        }
    }
    return m;
}

}  // namespace

CompiledModel build_gdrc(const MomentProfile& profile_pos, const MomentProfile& profile_neg,
                         const CoreSets& core_sets, double C, double epsilon) {
    return build(profile_pos, profile_neg, core_sets, C, epsilon, 0, false);
}

CompiledModel build_gdrc_app(const MomentProfile& profile_pos, const MomentProfile& profile_neg,
                             const CoreSets& core_sets, double C, double epsilon,
                             std::size_t rank) {
    return build(profile_pos, profile_neg, core_sets, C, epsilon, rank, true);
}

double gap_bound(const TrainedClassifier& classifier, const MomentProfile& profile_pos,
                 const MomentProfile& profile_neg, double C) {
    if (!classifier.certificate)
        throw CertificateRequired("gap_bound needs the dual certificate blocks");
    const std::size_t n = profile_pos.dim();
    const std::size_t rank = classifier.kind == ModelKind::Gdrc ? n : classifier.app_rank;
    if (rank < 1 || rank > n) throw RangeError("classifier rank outside [1, n]");

    const MomentProfile* prof[2] = {&profile_pos, &profile_neg};
    double acc = 0.0;
    for (int k = 0; k < 2; ++k) {
        const Matrix trailing = split_sqrt_factor(*prof[k], rank).trailing;  // n x (n-r)
        if (trailing.cols() == 0) continue;
        const Matrix tt = trailing.transposed();
        const double y = k == 0 ? 1.0 : -1.0;
        const auto& cert = *classifier.certificate;
        for (std::size_t j = 0; j < cert.v[k].size(); ++j) {
            Vector yw_v(n);
            for (std::size_t i = 0; i < n; ++i) yw_v[i] = y * classifier.w[i] + cert.v[k][j][i];
            acc += norm2(tt * yw_v) + norm2(tt * cert.u[k][j]);
        }
    }
    return 0.5 * C * acc;
}

}  // namespace gdrc::models
