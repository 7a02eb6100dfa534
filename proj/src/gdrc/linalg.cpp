#include "gdrc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gdrc {

double norm_p(const Vector& a, int p) {
    switch (p) {
        case 1: return norm1(a);
        case 2: return norm2(a);
        default: return norm_inf(a);
    }
}

EigSym eig_sym(const Matrix& a, double sym_tol) {
    const std::size_t n = a.rows();
    if (a.rows() != a.cols()) throw ShapeError("eig_sym: matrix not square");
    // Symmetry gate is relative to the matrix scale.
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    const double gate = sym_tol * std::max(1.0, scale);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > gate) throw ShapeError("eig_sym: matrix not symmetric");

    Matrix m = a;
    // Work on the symmetrized copy so the iteration sees an exactly symmetric
    // matrix regardless of sub-tolerance asymmetry.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }

    Matrix u = Matrix::identity(n);
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
        if (off <= 1e-300 || std::sqrt(off) <= 1e-14 * std::max(1.0, m.frobenius_norm())) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (apq == 0.0) continue;
                const double app = m(p, p);
                const double aqq = m(q, q);
                if (std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq) + 1e-300)) continue;

                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p);
                    const double mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k);
                    const double mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double ukp = u(k, p);
                    const double ukq = u(k, q);
                    u(k, p) = c * ukp - s * ukq;
                    u(k, q) = s * ukp + c * ukq;
                }
            }
        }
    }

    EigSym out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = m(i, i);

    // Sort descending; stable index order breaks eigenvalue ties deterministically.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return out.values[x] > out.values[y]; });

    Vector sorted(n);
    Matrix vecs(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t src = order[c];
        sorted[c] = out.values[src];
        double peak = 0.0;
        for (std::size_t r = 0; r < n; ++r) peak = std::max(peak, std::abs(u(r, src)));
        double sign = 1.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (std::abs(u(r, src)) > 1e-12 * peak) {
                sign = u(r, src) > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (std::size_t r = 0; r < n; ++r) vecs(r, c) = sign * u(r, src);
    }
    out.values = std::move(sorted);
    out.vectors = std::move(vecs);
    return out;
}

Matrix cholesky(const Matrix& a) {
    const std::size_t n = a.rows();
    if (a.rows() != a.cols()) throw ShapeError("cholesky: matrix not square");
    // Blocked right-looking factorization; the trailing update is a rank-kb
    // panel product running over the vector kernels.
    constexpr std::size_t kBlock = 96;
    Matrix l = a;
    Matrix bt(kBlock, kBlock);
    for (std::size_t k0 = 0; k0 < n; k0 += kBlock) {
        const std::size_t kb = std::min(kBlock, n - k0);
        for (std::size_t j = k0; j < k0 + kb; ++j) {
            const double d = l(j, j) - kernels::norm2sq(l.row(j) + k0, j - k0);
            if (!(d > 0.0)) throw NumericalError("cholesky: matrix not positive definite");
            const double ljj = std::sqrt(d);
            l(j, j) = ljj;
            const double inv = 1.0 / ljj;
            for (std::size_t i = j + 1; i < k0 + kb; ++i) {
                const double s = l(i, j) - kernels::dot(l.row(i) + k0, l.row(j) + k0, j - k0);
                l(i, j) = s * inv;
            }
        }
        if (k0 + kb >= n) break;
        // Panel solve: L21 = A21 L11^{-T}, row by row.
        for (std::size_t i = k0 + kb; i < n; ++i) {
            double* ri = l.row(i);
            for (std::size_t j = k0; j < k0 + kb; ++j) {
                const double s = ri[j] - kernels::dot(ri + k0, l.row(j) + k0, j - k0);
                ri[j] = s / l(j, j);
            }
        }
        // Trailing update of the lower triangle: A22 -= L21 L21^T.
        for (std::size_t c0 = k0 + kb; c0 < n; c0 += kBlock) {
            const std::size_t cb = std::min(kBlock, n - c0);
            for (std::size_t p = 0; p < kb; ++p)
                for (std::size_t c = 0; c < cb; ++c) bt(p, c) = l(c0 + c, k0 + p);
            for (std::size_t i = c0; i < n; ++i) {
                double* ri = l.row(i);
                const std::size_t len = std::min(cb, i - c0 + 1);
                for (std::size_t p = 0; p < kb; ++p) {
                    kernels::axpy(-ri[k0 + p], bt.row(p), ri + c0, len);
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) l(i, j) = 0.0;
    return l;
}

Vector cholesky_solve(const Matrix& chol_l, const Vector& b) {
    const std::size_t n = chol_l.rows();
    if (b.size() != n) throw ShapeError("cholesky_solve dimension mismatch");
    Vector x = b;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = (x[i] - kernels::dot(chol_l.row(i), x.data(), i)) / chol_l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= chol_l(k, ii) * x[k];
        x[ii] = s / chol_l(ii, ii);
    }
    return x;
}

void solve_lower_inplace(const Matrix& l, Matrix& b) {
    const std::size_t n = l.rows();
    if (b.rows() != n) throw ShapeError("solve_lower dimension mismatch");
    const std::size_t m = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) {
            kernels::axpy(-l(i, k), b.row(k), b.row(i), m);
        }
        kernels::scal(1.0 / l(i, i), b.row(i), m);
    }
}

void solve_lower_transposed_inplace(const Matrix& l, Matrix& b) {
    const std::size_t n = l.rows();
    if (b.rows() != n) throw ShapeError("solve_lower_t dimension mismatch");
    const std::size_t m = b.cols();
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) {
            kernels::axpy(-l(k, ii), b.row(k), b.row(ii), m);
        }
        kernels::scal(1.0 / l(ii, ii), b.row(ii), m);
    }
}

Matrix spd_inverse(const Matrix& a) {
    const Matrix l = cholesky(a);
    Matrix inv = Matrix::identity(a.rows());
    solve_lower_inplace(l, inv);
    solve_lower_transposed_inplace(l, inv);
    // Symmetrize against round-off drift.
    for (std::size_t i = 0; i < inv.rows(); ++i)
        for (std::size_t j = i + 1; j < inv.cols(); ++j) {
            const double v = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = v;
            inv(j, i) = v;
        }
    return inv;
}

Matrix sym_sqrt(const Matrix& a) {
    EigSym e = eig_sym(a);
    const std::size_t n = a.rows();
    Matrix root(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const double w = e.values[c];
        if (w < -1e-10 * std::max(1.0, std::abs(e.values[0])))
            throw NumericalError("sym_sqrt: matrix not positive semidefinite");
        const double sw = std::sqrt(std::max(w, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                root(i, j) += sw * e.vectors(i, c) * e.vectors(j, c);
    }
    return root;
}

double min_eig_sym(const Matrix& a) {
    if (a.rows() == 1) return a(0, 0);
    return eig_sym(a, 1e-9).values.back();
}

bool lu_solve(Matrix a, Vector& b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw ShapeError("lu_solve dimension mismatch");
    std::vector<std::size_t> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t best = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(best, k))) best = i;
        if (std::abs(a(best, k)) < 1e-14) return false;
        if (best != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(best, j));
            std::swap(b[k], b[best]);
        }
        const double inv = 1.0 / a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) * inv;
            if (f == 0.0) continue;
            a(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * b[j];
        b[ii] = s / a(ii, ii);
    }
    return true;
}

}  // namespace gdrc
