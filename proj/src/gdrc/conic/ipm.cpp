#include <algorithm>
#include <cmath>
#include <chrono>
#include <cstdio>

#include "cone_form.hpp"
#include "gdrc/conic/solve.hpp"
#include "gdrc/linalg.hpp"

// Nesterov-Todd scaled primal-dual predictor-corrector over the lowered form
//   minimize c^T x  s.t.  M_b(x) := M_{b,0} + sum_j x_j M_{b,j}  PSD per block,
//                         a_r^T x + b_r >= 0 per diagonal row.
// Infeasible start; per-iteration work is the Schur complement assembly plus
// one Cholesky factorization of the m x m system.
namespace gdrc::conic {

namespace {

using detail::ConeForm;
using detail::PsdBlockData;
using detail::SparseRow;
using detail::TriEntry;

Matrix symmetrize(Matrix m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

// P * A * P^T for symmetric A.
Matrix sandwich(const Matrix& p, const Matrix& a) {
    Matrix ap = a * p.transposed();
    return symmetrize(p * ap);
}

// Frobenius inner product of a sparse symmetric var-matrix with a dense
// symmetric matrix.
double sparse_inner(const std::vector<TriEntry>& entries, const Matrix& u) {
    double acc = 0.0;
    for (const TriEntry& e : entries) {
        acc += (e.r == e.c ? 1.0 : 2.0) * e.coef * u(e.r, e.c);
    }
    return acc;
}

void sparse_accumulate(const std::vector<TriEntry>& entries, double scale, Matrix& m) {
    for (const TriEntry& e : entries) {
        m(e.r, e.c) += scale * e.coef;
        if (e.r != e.c) m(e.c, e.r) += scale * e.coef;
    }
}

// Largest step a such that S + a*D stays PSD, given S = L L^T. Returns a
// value > 1 when the full step is safe.
double max_step(const Matrix& l, const Matrix& d) {
    Matrix x = d;
    solve_lower_inplace(l, x);
    Matrix xt = x.transposed();
    solve_lower_inplace(l, xt);
    const double lmin = min_eig_sym(symmetrize(std::move(xt)));
    if (lmin >= 0.0) return 1e30;
    return -1.0 / lmin;
}

struct BlockWork {
    Matrix s, z;        // iterates
    Matrix ls, lz;      // Cholesky factors
    Matrix r, rinv;     // NT factor: W = r r^T
    Matrix winv;
    Vector sigma;       // NT scaled point (diagonal)
    Matrix rp;          // primal residual M(x) - s
    Matrix u;           // Winv (Rc - rp) Winv for the current RHS
    Matrix ds, dz;      // current direction
    Matrix ds_aff, dz_aff;
};

struct DiagWork {
    // one entry per row
    Vector s, z, w, lambda, rp, u, ds, dz, ds_aff, dz_aff;
};

class Ipm {
public:
    Ipm(const ConeForm& f, const SolverOptions& opts) : f_(f), o_(opts) {}

    Solution run();

private:
    const ConeForm& f_;
    const SolverOptions& o_;

    std::size_t m_ = 0;  // variables
    Vector x_;
    std::vector<BlockWork> blk_;
    DiagWork dia_;
    double nu_ = 0.0;  // total cone order

    Vector rd_;        // dual residual
    double data_norm_ = 1.0, cost_norm_ = 1.0;

    void init();
    void compute_residuals();
    double mu() const;
    void compute_scaling();
    void identity_scaling();
    void assemble_schur(Matrix& b) const;
    void build_rhs(Vector& rhs) const;    // from current per-block u / dia_.u
    void directions(const Matrix& schur, const Matrix& chol_b, const Vector& rhs, Vector& dx);
    void set_affine_target();
    void set_corrector_target(double sigma_mu, double ap_aff, double ad_aff);
    std::pair<double, double> step_lengths() const;

    double pobj() const { return kernels::dot(f_.cost.data(), x_.data(), m_) + f_.cost_offset; }
    double dobj() const;
    double primal_res_norm() const;
    bool farkas_certificate() const;
    bool primal_ray(const Vector& dx) const;
};

void Ipm::init() {
    m_ = f_.nvars;
    x_.assign(m_, 0.0);
    rd_.assign(m_, 0.0);

    double dn = 0.0;
    for (const auto& b : f_.psd) dn += b.m0.frobenius_norm() * b.m0.frobenius_norm();
    for (const auto& r : f_.diag) dn += r.b0 * r.b0;
    data_norm_ = 1.0 + std::sqrt(dn);
    cost_norm_ = 1.0 + norm2(f_.cost);

    nu_ = static_cast<double>(f_.diag.size());
    blk_.resize(f_.psd.size());
    for (std::size_t i = 0; i < f_.psd.size(); ++i) nu_ += static_cast<double>(f_.psd[i].dim);

    const std::size_t nrows = f_.diag.size();
    dia_.s.assign(nrows, 0.0);
    dia_.z.assign(nrows, 0.0);
    dia_.w.assign(nrows, 0.0);
    dia_.lambda.assign(nrows, 0.0);
    dia_.rp.assign(nrows, 0.0);
    dia_.u.assign(nrows, 0.0);
    dia_.ds.assign(nrows, 0.0);
    dia_.dz.assign(nrows, 0.0);
    dia_.ds_aff.assign(nrows, 0.0);
    dia_.dz_aff.assign(nrows, 0.0);

    // Least-squares start: x0 minimizes ||M(x)||_F^2 + sum row(x)^2 so the
    // primal slack begins near the affine set; the dual starts at the
    // minimum-norm solution of <M_i, Z> + a_i^T z = c_i. Both are then
    // shifted into the cone interior.
    Matrix gram;
    identity_scaling();
    assemble_schur(gram);
    for (std::size_t i = 0; i < m_; ++i) gram(i, i) += 1e-10 * (1.0 + gram(i, i));
    Matrix gram_chol;
    bool have_ls = true;
    try {
        gram_chol = cholesky(gram);
    } catch (const NumericalError&) {
        have_ls = false;
    }

    if (have_ls) {
        // rhs_p[i] = -<M_i, M0> - a_i b0 ; rhs_d = cost
        Vector rhs_p(m_, 0.0);
        for (const auto& b : f_.psd)
            for (const auto& [var, entries] : b.vars)
                rhs_p[var] -= sparse_inner(entries, b.m0);
        for (const auto& row : f_.diag)
            for (const auto& [var, co] : row.a) rhs_p[var] -= co * row.b0;
        x_ = cholesky_solve(gram_chol, rhs_p);
        Vector y = cholesky_solve(gram_chol, f_.cost);

        double shift_s = 0.0, shift_z = 0.0;
        for (std::size_t bi = 0; bi < f_.psd.size(); ++bi) {
            const PsdBlockData& data = f_.psd[bi];
            Matrix mx = data.m0;
            Matrix zb(data.dim, data.dim);
            for (const auto& [var, entries] : data.vars) {
                sparse_accumulate(entries, x_[var], mx);
                sparse_accumulate(entries, y[var], zb);
            }
            blk_[bi].s = symmetrize(std::move(mx));
            blk_[bi].z = symmetrize(std::move(zb));
            shift_s = std::max(shift_s, -min_eig_sym(blk_[bi].s));
            shift_z = std::max(shift_z, -min_eig_sym(blk_[bi].z));
        }
        for (std::size_t r = 0; r < nrows; ++r) {
            dia_.s[r] = f_.diag[r].eval(x_);
            dia_.z[r] = 0.0;
            for (const auto& [var, co] : f_.diag[r].a) dia_.z[r] += co * y[var];
            shift_s = std::max(shift_s, -dia_.s[r]);
            shift_z = std::max(shift_z, -dia_.z[r]);
        }
        const double pad_s = shift_s > 0.0 ? 1.5 * shift_s + 1.0 : 1.0;
        const double pad_z = shift_z > 0.0 ? 1.5 * shift_z + 1.0 : 1.0;
        for (auto& w : blk_) {
            for (std::size_t i = 0; i < w.s.rows(); ++i) {
                w.s(i, i) += pad_s;
                w.z(i, i) += pad_z;
            }
        }
        for (std::size_t r = 0; r < nrows; ++r) {
            dia_.s[r] += pad_s;
            dia_.z[r] += pad_z;
        }
    } else {
        for (std::size_t i = 0; i < f_.psd.size(); ++i) {
            const std::size_t d = f_.psd[i].dim;
            const double scale = std::max(1.0, f_.psd[i].m0.frobenius_norm());
            blk_[i].s = Matrix::identity(d);
            blk_[i].s.scale(scale);
            blk_[i].z = Matrix::identity(d);
        }
        for (std::size_t r = 0; r < nrows; ++r) {
            dia_.s[r] = std::max(1.0, std::abs(f_.diag[r].b0));
            dia_.z[r] = 1.0;
        }
    }
}

// Sets the NT scaling state to the identity so assemble_schur computes the
// plain Gram matrix of the constraint data.
void Ipm::identity_scaling() {
    for (std::size_t bi = 0; bi < f_.psd.size(); ++bi) {
        blk_[bi].winv = Matrix::identity(f_.psd[bi].dim);
    }
    dia_.w.assign(f_.diag.size(), 1.0);
}

void Ipm::compute_residuals() {
    for (std::size_t i = 0; i < m_; ++i) rd_[i] = f_.cost[i];
    for (std::size_t bi = 0; bi < f_.psd.size(); ++bi) {
        const PsdBlockData& data = f_.psd[bi];
        BlockWork& w = blk_[bi];
        // rp = M(x) - S
        Matrix mx = data.m0;
        for (const auto& [var, entries] : data.vars) sparse_accumulate(entries, x_[var], mx);
        w.rp = mx;
        w.rp.add_scaled(w.s, -1.0);
        for (const auto& [var, entries] : data.vars)
            rd_[var] -= sparse_inner(entries, w.z);
    }
    for (std::size_t r = 0; r < f_.diag.size(); ++r) {
        const SparseRow& row = f_.diag[r];
        dia_.rp[r] = row.eval(x_) - dia_.s[r];
        for (const auto& [var, c] : row.a) rd_[var] -= c * dia_.z[r];
    }
}

double Ipm::mu() const {
    double acc = 0.0;
    for (std::size_t bi = 0; bi < blk_.size(); ++bi) {
        const Matrix& s = blk_[bi].s;
        const Matrix& z = blk_[bi].z;
        acc += kernels::dot(s.data(), z.data(), s.rows() * s.cols());
    }
    for (std::size_t r = 0; r < dia_.s.size(); ++r) acc += dia_.s[r] * dia_.z[r];
    return acc / std::max(nu_, 1.0);
}

double Ipm::dobj() const {
    double acc = 0.0;
    for (std::size_t bi = 0; bi < blk_.size(); ++bi) {
        const Matrix& m0 = f_.psd[bi].m0;
        acc -= kernels::dot(m0.data(), blk_[bi].z.data(), m0.rows() * m0.cols());
    }
    for (std::size_t r = 0; r < f_.diag.size(); ++r) acc -= f_.diag[r].b0 * dia_.z[r];
    return acc + f_.cost_offset;
}

double Ipm::primal_res_norm() const {
    double acc = 0.0;
    for (const auto& w : blk_)
        acc += kernels::norm2sq(w.rp.data(), w.rp.rows() * w.rp.cols());
    acc += kernels::norm2sq(dia_.rp.data(), dia_.rp.size());
    return std::sqrt(acc);
}

void Ipm::compute_scaling() {
    for (std::size_t bi = 0; bi < blk_.size(); ++bi) {
        BlockWork& w = blk_[bi];
        const std::size_t d = w.s.rows();
        // Rounding can push a boundary iterate a hair outside the cone; a
        // relative jitter keeps the factorization alive.
        for (Matrix* m : {&w.s, &w.z}) {
            for (int attempt = 0;; ++attempt) {
                try {
                    Matrix l = cholesky(*m);
                    (m == &w.s ? w.ls : w.lz) = std::move(l);
                    break;
                } catch (const NumericalError&) {
                    if (attempt >= 3) throw;
                    double peak = 1e-300;
                    for (std::size_t i = 0; i < d; ++i) peak = std::max(peak, (*m)(i, i));
                    const double jitter = peak * std::pow(10.0, attempt - 13);
                    for (std::size_t i = 0; i < d; ++i) (*m)(i, i) += jitter;
                }
            }
        }
        // T = Ls^T Z Ls, eig T = V diag(sigma^2) V^T
        Matrix t = symmetrize(w.ls.transposed() * (w.z * w.ls));
        EigSym e = eig_sym(t, 1e-6);
        w.sigma.resize(d);
        for (std::size_t i = 0; i < d; ++i) w.sigma[i] = std::sqrt(std::max(e.values[i], 1e-300));
        // R = Ls V diag(sigma^{-1/2});  Rinv^T = Ls^{-T} V diag(sigma^{1/2})
        Matrix b1 = w.ls * e.vectors;
        Matrix b2 = e.vectors;
        for (std::size_t c = 0; c < d; ++c) {
            const double si = std::sqrt(w.sigma[c]);
            for (std::size_t rr = 0; rr < d; ++rr) {
                b1(rr, c) /= si;
                b2(rr, c) *= si;
            }
        }
        w.r = std::move(b1);
        solve_lower_transposed_inplace(w.ls, b2);  // b2 <- Ls^{-T} b2 = Rinv^T
        w.winv = symmetrize(b2 * b2.transposed());
        w.rinv = b2.transposed();
    }
    for (std::size_t r = 0; r < dia_.s.size(); ++r) {
        dia_.w[r] = std::sqrt(dia_.s[r] / dia_.z[r]);
        dia_.lambda[r] = std::sqrt(dia_.s[r] * dia_.z[r]);
    }
}

void Ipm::assemble_schur(Matrix& b) const {
    b = Matrix(m_, m_);
    // Variables with few entries in a block are combined pairwise; variables
    // touching many entries get a dense sandwich Winv M_j Winv first. The
    // split keeps the assembly near-linear for bordered LMIs while staying
    // fast for the dense norm-epigraph cones.
    constexpr std::size_t kHeavy = 4;
    Matrix t_dense;
    for (std::size_t bi = 0; bi < blk_.size(); ++bi) {
        const PsdBlockData& data = f_.psd[bi];
        const Matrix& xw = blk_[bi].winv;
        const std::size_t d = data.dim;
        const auto& vars = data.vars;

        for (std::size_t jj = 0; jj < vars.size(); ++jj) {
            const auto& [vj, ej] = vars[jj];
            if (ej.size() <= kHeavy) continue;
            // T_j = Winv M_j Winv by rank-one expansion over the entries.
            t_dense = Matrix(d, d);
            for (const TriEntry& e : ej) {
                for (std::size_t a = 0; a < d; ++a) {
                    kernels::axpy(e.coef * xw(a, e.r), xw.row(e.c), t_dense.row(a), d);
                    if (e.r != e.c)
                        kernels::axpy(e.coef * xw(a, e.c), xw.row(e.r), t_dense.row(a), d);
                }
            }
            for (std::size_t ii = 0; ii < vars.size(); ++ii) {
                const auto& [vi, ei] = vars[ii];
                const bool i_heavy = ei.size() > kHeavy;
                if (i_heavy && vi > vj) continue;  // heavy-heavy handled once
                if (!i_heavy || vi <= vj) {
                    const double acc = sparse_inner(ei, t_dense);
                    if (vi <= vj)
                        b(vi, vj) += acc;
                    else
                        b(vj, vi) += acc;
                }
            }
        }

        for (std::size_t jj = 0; jj < vars.size(); ++jj) {
            const auto& [vj, ej] = vars[jj];
            if (ej.size() > kHeavy) continue;
            for (std::size_t ii = 0; ii <= jj; ++ii) {
                const auto& [vi, ei] = vars[ii];
                if (ei.size() > kHeavy) continue;  // covered by the dense pass
                double acc = 0.0;
                for (const TriEntry& e : ei) {
                    for (const TriEntry& g : ej) {
                        // <Sym(E_ab), Winv Sym(E_cd) Winv>
                        const std::size_t a = e.r, bb = e.c, c = g.r, dd = g.c;
                        double t = xw(a, c) * xw(bb, dd);
                        if (a != bb) t += xw(bb, c) * xw(a, dd);
                        if (c != dd) {
                            t += xw(a, dd) * xw(bb, c);
                            if (a != bb) t += xw(bb, dd) * xw(a, c);
                        }
                        acc += e.coef * g.coef * t;
                    }
                }
                b(vi, vj) += acc;
            }
        }
    }
    for (std::size_t r = 0; r < f_.diag.size(); ++r) {
        const auto& row = f_.diag[r].a;
        const double inv_w2 = 1.0 / (dia_.w[r] * dia_.w[r]);
        for (std::size_t jj = 0; jj < row.size(); ++jj)
            for (std::size_t ii = 0; ii <= jj; ++ii) {
                const auto [vi, ci] = row[ii];
                const auto [vj, cj] = row[jj];
                if (vi <= vj)
                    b(vi, vj) += ci * cj * inv_w2;
                else
                    b(vj, vi) += ci * cj * inv_w2;
            }
    }
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = i + 1; j < m_; ++j) b(j, i) = b(i, j);
}

void Ipm::build_rhs(Vector& rhs) const {
    rhs.assign(m_, 0.0);
    for (std::size_t bi = 0; bi < blk_.size(); ++bi) {
        const PsdBlockData& data = f_.psd[bi];
        for (const auto& [var, entries] : data.vars)
            rhs[var] += sparse_inner(entries, blk_[bi].u);
    }
    for (std::size_t r = 0; r < f_.diag.size(); ++r) {
        for (const auto& [var, c] : f_.diag[r].a) rhs[var] += c * dia_.u[r];
    }
    for (std::size_t i = 0; i < m_; ++i) rhs[i] -= rd_[i];
}

// Affine target: centrality RHS  R d R^T = -S  per block, w*d = -s per row.
void Ipm::set_affine_target() {
    for (std::size_t bi = 0; bi < blk_.size(); ++bi) {
        BlockWork& w = blk_[bi];
        Matrix rc = w.s;
        rc.scale(-1.0);
        rc.add_scaled(w.rp, -1.0);
        w.u = sandwich(w.winv, rc);
    }
    for (std::size_t r = 0; r < dia_.s.size(); ++r) {
        dia_.u[r] = (-dia_.s[r] - dia_.rp[r]) / (dia_.w[r] * dia_.w[r]);
    }
}

// Mehrotra corrector target built from the affine direction. The
// second-order products are damped only when they dwarf the centering
// target, which happens with the huge affine directions of an infeasible
// cold start; near the central path the full correction is kept.
void Ipm::set_corrector_target(double sigma_mu, double ap_aff, double ad_aff) {
    // Scaled product magnitude vs. the current complementarity scale.
    double prod = 0.0;
    for (std::size_t bi = 0; bi < blk_.size(); ++bi) {
        BlockWork& w = blk_[bi];
        const Matrix p = symmetrize(w.rinv * (w.ds_aff * w.rinv.transposed()));
        const Matrix q = symmetrize(w.r.transposed() * (w.dz_aff * w.r));
        prod = std::max(prod, p.frobenius_norm() * q.frobenius_norm());
    }
    for (std::size_t r = 0; r < dia_.s.size(); ++r)
        prod = std::max(prod, std::abs(dia_.ds_aff[r] / dia_.w[r] * dia_.w[r] * dia_.dz_aff[r]));
    const double mu_scale = mu() * std::max(nu_, 1.0);
    const double damp = prod > 1e4 * mu_scale ? 1e4 * mu_scale / prod : 1.0;
    (void)ap_aff;
    (void)ad_aff;

    for (std::size_t bi = 0; bi < blk_.size(); ++bi) {
        BlockWork& w = blk_[bi];
        const std::size_t d = w.s.rows();
        Matrix p = symmetrize(w.rinv * (w.ds_aff * w.rinv.transposed()));
        Matrix q = symmetrize(w.r.transposed() * (w.dz_aff * w.r));
        p.scale(damp);
        Matrix pq = p * q;
        // target D = sigma*mu*I - Lambda^2 - (P o Q)
        Matrix dmat(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                double target = -0.5 * (pq(i, j) + pq(j, i));
                if (i == j) target += sigma_mu - w.sigma[i] * w.sigma[i];
                dmat(i, j) = 2.0 * target / (w.sigma[i] + w.sigma[j]);
            }
        Matrix rc = sandwich(w.r, dmat);
        rc.add_scaled(w.rp, -1.0);
        w.u = sandwich(w.winv, rc);
    }
    for (std::size_t r = 0; r < dia_.s.size(); ++r) {
        const double lam = dia_.lambda[r];
        const double target =
            sigma_mu - lam * lam - damp * dia_.ds_aff[r] * dia_.dz_aff[r];
        const double d = target / lam;
        dia_.u[r] = (dia_.w[r] * d - dia_.rp[r]) / (dia_.w[r] * dia_.w[r]);
    }
}

void Ipm::directions(const Matrix& schur, const Matrix& chol_b, const Vector& rhs, Vector& dx) {
    dx = cholesky_solve(chol_b, rhs);
    // One round of iterative refinement keeps the direction usable when the
    // Schur system turns ill-conditioned near a degenerate face.
    Vector resid(m_);
    kernels::gemv(schur.data(), m_, m_, dx.data(), resid.data());
    for (std::size_t i = 0; i < m_; ++i) resid[i] = rhs[i] - resid[i];
    const Vector corr = cholesky_solve(chol_b, resid);
    kernels::axpy(1.0, corr.data(), dx.data(), m_);
    for (std::size_t bi = 0; bi < blk_.size(); ++bi) {
        const PsdBlockData& data = f_.psd[bi];
        BlockWork& w = blk_[bi];
        const std::size_t d = data.dim;
        Matrix n(d, d);
        for (const auto& [var, entries] : data.vars) sparse_accumulate(entries, dx[var], n);
        w.dz = w.u;
        w.dz.add_scaled(sandwich(w.winv, n), -1.0);
        w.ds = w.rp;
        w.ds.add_scaled(n, 1.0);
    }
    for (std::size_t r = 0; r < f_.diag.size(); ++r) {
        const double adx = f_.diag[r].eval(dx) - f_.diag[r].b0;
        dia_.dz[r] = dia_.u[r] - adx / (dia_.w[r] * dia_.w[r]);
        dia_.ds[r] = dia_.rp[r] + adx;
    }
}

std::pair<double, double> Ipm::step_lengths() const {
    double ap = 1e30, ad = 1e30;
    for (const auto& w : blk_) {
        ap = std::min(ap, max_step(w.ls, w.ds));
        ad = std::min(ad, max_step(w.lz, w.dz));
    }
    for (std::size_t r = 0; r < dia_.s.size(); ++r) {
        if (dia_.ds[r] < 0.0) ap = std::min(ap, -dia_.s[r] / dia_.ds[r]);
        if (dia_.dz[r] < 0.0) ad = std::min(ad, -dia_.z[r] / dia_.dz[r]);
    }
    return {ap, ad};
}

bool Ipm::farkas_certificate() const {
    // A dual ray: <M_i, Z> + a_i^T z ~ 0 for all i with -<M_0, Z> - b0^T z > 0
    // proves primal infeasibility. The iterates run off along such a ray when
    // the cone constraints are inconsistent, so test the normalized dual.
    double znorm = 0.0;
    for (const auto& w : blk_) znorm += kernels::norm2sq(w.z.data(), w.z.rows() * w.z.cols());
    znorm += kernels::norm2sq(dia_.z.data(), dia_.z.size());
    znorm = std::sqrt(znorm);
    if (znorm < 1e4) return false;

    double hd = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
        const double ray = f_.cost[i] - rd_[i];  // = <M_i, Z> + a_i^T z
        hd += ray * ray;
    }
    hd = std::sqrt(hd) / znorm;
    const double ray_obj = (dobj() - f_.cost_offset) / znorm;
    return hd < 1e-7 && ray_obj > 1e-8;
}

// A normalized direction that is a feasible recession ray with negative cost
// certifies unboundedness.
bool Ipm::primal_ray(const Vector& dx) const {
    const double nrm = norm2(dx);
    if (nrm < 1e6) return false;
    const double inv = 1.0 / nrm;
    double cd = 0.0;
    for (std::size_t i = 0; i < m_; ++i) cd += f_.cost[i] * dx[i];
    if (cd * inv > -1e-9) return false;
    for (const auto& row : f_.diag) {
        double a = 0.0;
        for (const auto& [var, c] : row.a) a += c * dx[var];
        if (a * inv < -1e-7) return false;
    }
    for (const auto& blk : f_.psd) {
        Matrix dir(blk.dim, blk.dim);
        for (const auto& [var, entries] : blk.vars)
            sparse_accumulate(entries, dx[var] * inv, dir);
        if (min_eig_sym(symmetrize(std::move(dir))) < -1e-7) return false;
    }
    return true;
}

Solution Ipm::run() {
    Solution sol;
    sol.solver = "ipm-nt";
    init();

    if (m_ == 0) {
        sol.status = Status::Optimal;
        sol.objective = f_.cost_offset;
        return sol;
    }
    if (f_.psd.empty() && f_.diag.empty()) {
        const bool zero_cost = norm2(f_.cost) == 0.0;
        sol.status = zero_cost ? Status::Optimal : Status::Unbounded;
        sol.objective = f_.cost_offset;
        return sol;
    }

    const double tol = o_.tolerance;
    // Optimality contract: feasibility residuals within tol, relative gap
    // within 10 tol. Degenerate programs can stall just above the target and
    // then lose dual feasibility to cancellation, so the best iterate seen is
    // kept and restored at exit.
    const double gap_tol = 10.0 * tol;
    Matrix schur, chol_b;
    Vector rhs, dx;
    int tiny_steps = 0;
    double best_err = 1e300;
    Vector best_x;
    double best_obj = 0.0;
    Residuals best_res;
    int best_iter = 0;
    int no_improve = 0;

    try {
    for (int iter = 0; iter < o_.max_iterations; ++iter) {
        compute_residuals();
        const double m = mu();
        const double pres = primal_res_norm() / data_norm_;
        const double dres = norm2(rd_) / cost_norm_;
        const double po = pobj(), dobj_v = dobj();
        const double relgap = std::abs(po - dobj_v) / (1.0 + std::abs(po) + std::abs(dobj_v));

        if (o_.verbose) {
            std::printf("iter %3d  pobj % .6e dobj % .6e  pres %.2e dres %.2e mu %.2e\n",
                        iter, po, dobj_v, pres, dres, m);
        }

        sol.residuals = {pres, dres, relgap};
        sol.iterations = iter;

        // Progress is measured with the complementarity mu, not pobj - dobj:
        // the signed objective difference can cross zero mid-run and make a
        // healthy iterate look converged (or a later one look worse).
        const double relcomp = m * nu_ / (1.0 + std::abs(po) + std::abs(dobj_v));
        const double err = std::max({pres, dres, std::min(relgap, relcomp) / 10.0});
        if (err < 0.999 * best_err) {
            best_err = err;
            best_x = x_;
            best_obj = po;
            best_res = {pres, dres, relgap};
            best_iter = iter;
            no_improve = 0;
        } else {
            ++no_improve;
        }

        if (pres <= tol && dres <= tol && relgap <= gap_tol) {
            sol.status = Status::Optimal;
            sol.objective = po;
            break;
        }
        if (farkas_certificate()) {
            sol.status = Status::Infeasible;
            sol.objective = po;
            break;
        }
        if (po < -1e12 * cost_norm_ && pres <= 1e-6) {
            sol.status = Status::Unbounded;
            sol.objective = po;
            break;
        }
        // Stalled: settle for the best iterate when it is close to target.
        if (no_improve >= 30 || m < 1e-4 * tol) {
            if (best_err > 10.0 * tol && farkas_certificate()) {
                sol.status = Status::Infeasible;
            } else {
                sol.status = best_err <= 10.0 * tol ? Status::Optimal : Status::NumericalTrouble;
            }
            x_ = best_x;
            sol.objective = best_obj;
            sol.residuals = best_res;
            sol.iterations = best_iter;
            break;
        }

        const auto tw0 = std::chrono::steady_clock::now();
        compute_scaling();
        const auto tw1 = std::chrono::steady_clock::now();
        assemble_schur(schur);
        const auto tw2 = std::chrono::steady_clock::now();
        // Static regularization keeps the factorization alive when a variable
        // barely appears in any cone.
        double reg = 1e-13;
        for (;;) {
            chol_b = schur;
            for (std::size_t i = 0; i < m_; ++i) chol_b(i, i) += reg * (1.0 + schur(i, i));
            try {
                chol_b = cholesky(chol_b);
                break;
            } catch (const NumericalError&) {
                reg *= 1e3;
                if (reg > 1e-1) {
                    sol.status = Status::NumericalTrouble;
                    sol.objective = po;
                    return sol;
                }
            }
        }

        const auto tw3 = std::chrono::steady_clock::now();
        if (o_.verbose) {
            std::printf("        [scale %.2fs schur %.2fs chol %.2fs]\n",
                        std::chrono::duration<double>(tw1 - tw0).count(),
                        std::chrono::duration<double>(tw2 - tw1).count(),
                        std::chrono::duration<double>(tw3 - tw2).count());
        }
        // Predictor.
        set_affine_target();
        build_rhs(rhs);
        directions(schur, chol_b, rhs, dx);
        auto [ap_raw, ad_raw] = step_lengths();
        // One synchronized step for both sides: separate steps let the
        // iterates drift apart under an infeasible start.
        const double a_aff = std::min({1.0, ap_raw, ad_raw});
        const double ap_aff = a_aff, ad_aff = a_aff;

        double ghat = 0.0;
        for (std::size_t bi = 0; bi < blk_.size(); ++bi) {
            BlockWork& w = blk_[bi];
            w.ds_aff = w.ds;
            w.dz_aff = w.dz;
            Matrix s2 = w.s;
            s2.add_scaled(w.ds, ap_aff);
            Matrix z2 = w.z;
            z2.add_scaled(w.dz, ad_aff);
            ghat += kernels::dot(s2.data(), z2.data(), s2.rows() * s2.cols());
        }
        for (std::size_t r = 0; r < dia_.s.size(); ++r) {
            dia_.ds_aff[r] = dia_.ds[r];
            dia_.dz_aff[r] = dia_.dz[r];
            ghat += (dia_.s[r] + ap_aff * dia_.ds[r]) * (dia_.z[r] + ad_aff * dia_.dz[r]);
        }
        const double mu_aff = ghat / std::max(nu_, 1.0);
        double sigma = std::pow(std::max(mu_aff, 0.0) / m, 3.0);
        sigma = std::clamp(sigma, 1e-8, 1.0);

        // Corrector.
        set_corrector_target(sigma * m, ap_aff, ad_aff);
        build_rhs(rhs);
        directions(schur, chol_b, rhs, dx);
        auto [ap_c, ad_c] = step_lengths();
        const double eta = 0.99;
        const double a = std::min(1.0, eta * std::min(ap_c, ad_c));
        const double ap = a, ad = a;

        if (o_.verbose) {
            std::printf("        sigma %.2e  ap %.3e ad %.3e  |dx| %.2e\n", sigma, ap, ad,
                        norm2(dx));
            for (std::size_t bi = 0; bi < blk_.size(); ++bi) {
                const auto& w = blk_[bi];
                const double as = max_step(w.ls, w.ds), az = max_step(w.lz, w.dz);
                if (std::min(as, az) < 2.0 * std::min(ap, ad) / 0.99)
                    std::printf("          blk %zu dim %zu: smin %.1e zmin %.1e steps %.1e/%.1e\n",
                                bi, w.s.rows(), min_eig_sym(w.s), min_eig_sym(w.z), as, az);
            }
            for (std::size_t r = 0; r < dia_.s.size(); ++r) {
                double as = dia_.ds[r] < 0 ? -dia_.s[r]/dia_.ds[r] : 1e30;
                double az = dia_.dz[r] < 0 ? -dia_.z[r]/dia_.dz[r] : 1e30;
                if (std::min(as, az) < 2.0 * std::min(ap, ad) / 0.99)
                    std::printf("          row %zu: s %.1e z %.1e steps %.1e/%.1e\n", r, dia_.s[r], dia_.z[r], as, az);
            }
        }
        kernels::axpy(ap, dx.data(), x_.data(), m_);
        for (auto& w : blk_) {
            w.s.add_scaled(w.ds, ap);
            w.z.add_scaled(w.dz, ad);
        }
        for (std::size_t r = 0; r < dia_.s.size(); ++r) {
            dia_.s[r] += ap * dia_.ds[r];
            dia_.z[r] += ad * dia_.dz[r];
        }

        if (ap < 1e-4 && ad < 1e-4) {
            if (++tiny_steps >= 4) {
                if (farkas_certificate()) {
                    sol.status = Status::Infeasible;
                } else if (primal_ray(dx)) {
                    sol.status = Status::Unbounded;
                } else {
                    sol.status =
                        best_err <= 10.0 * tol ? Status::Optimal : Status::NumericalTrouble;
                }
                x_ = best_x;
                sol.objective = best_obj;
                sol.residuals = best_res;
                sol.iterations = best_iter;
                break;
            }
        } else {
            tiny_steps = 0;
        }
        if (iter + 1 == o_.max_iterations) {
            sol.status = best_err <= 10.0 * tol ? Status::Optimal : Status::NumericalTrouble;
            if (!best_x.empty()) {
                x_ = best_x;
                sol.objective = best_obj;
                sol.residuals = best_res;
                sol.iterations = best_iter;
            }
        }
    }

    } catch (const NumericalError&) {
        // Factorization breakdown past every retry: fall back to the best
        // iterate seen and classify it honestly.
        if (farkas_certificate()) {
            sol.status = Status::Infeasible;
        } else {
            sol.status = best_err <= 10.0 * o_.tolerance ? Status::Optimal
                                                         : Status::NumericalTrouble;
        }
        if (!best_x.empty()) {
            x_ = best_x;
            sol.objective = best_obj;
            sol.residuals = best_res;
            sol.iterations = best_iter;
        }
    }

    sol.values["__x__"] = x_;
    return sol;
}

class IpmBackend final : public Backend {
public:
    Solution solve(const Program& p, const SolverOptions& opts) override {
        const ConeForm form = detail::lower(p);
        Solution sol;
        if (form.trivially_infeasible) {
            sol.status = Status::Infeasible;
            sol.solver = "ipm-nt";
            return sol;
        }
        Ipm ipm(form, opts);
        sol = ipm.run();

        // Map compressed solution back to program blocks.
        Vector xc = sol.values.count("__x__") ? sol.values["__x__"] : Vector(form.nvars, 0.0);
        sol.values.erase("__x__");
        const Vector full = form.expand(xc);
        for (const auto& b : p.blocks()) {
            Vector vals(b.scalar_count);
            for (std::size_t i = 0; i < b.scalar_count; ++i) vals[i] = full[b.offset + i];
            sol.values[b.name] = std::move(vals);
        }
        return sol;
    }
    const char* name() const override { return "ipm-nt"; }
};

}  // namespace

std::unique_ptr<Backend> make_ipm_backend() { return std::make_unique<IpmBackend>(); }

Solution solve(const Program& p, double tolerance) {
    SolverOptions opts;
    opts.tolerance = tolerance;
    return make_ipm_backend()->solve(p, opts);
}

}  // namespace gdrc::conic
