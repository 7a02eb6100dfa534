#pragma once

#include <utility>

#include "gdrc/matrix.hpp"

namespace gdrc {

// Symmetric eigendecomposition A = U diag(w) U^T, eigenvalues descending.
//
// Cyclic Jacobi with a fixed sweep order, so results are deterministic for a
// given input. Eigenvector sign convention: the first component of each
// vector whose magnitude exceeds 1e-12 * max|component| is made positive.
// Throws ShapeError when A is not symmetric within sym_tol.
struct EigSym {
    Vector values;  // descending
    Matrix vectors; // columns are eigenvectors
};
EigSym eig_sym(const Matrix& a, double sym_tol = 1e-12);

// Cholesky factor L (lower triangular) with A = L L^T.
// Throws NumericalError when A is not positive definite.
Matrix cholesky(const Matrix& a);

// Solve L y = b, then L^T x = y.
Vector cholesky_solve(const Matrix& chol_l, const Vector& b);

// In-place forward/back substitution against a lower-triangular factor,
// applied to every column of B. Solves L X = B or L^T X = B.
void solve_lower_inplace(const Matrix& l, Matrix& b);
void solve_lower_transposed_inplace(const Matrix& l, Matrix& b);

// Inverse of an SPD matrix via its Cholesky factor.
Matrix spd_inverse(const Matrix& a);

// Symmetric PSD square root U diag(sqrt(w)) U^T.
Matrix sym_sqrt(const Matrix& a);

// Smallest eigenvalue of a symmetric matrix (via eig_sym).
double min_eig_sym(const Matrix& a);

// LU solve with partial pivoting for small general systems (presolve only).
// Returns false when the matrix is numerically singular.
bool lu_solve(Matrix a, Vector& b);

}  // namespace gdrc
