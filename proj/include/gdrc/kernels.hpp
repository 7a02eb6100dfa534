#pragma once

#include <cstddef>
#include <string>

// Dense double-precision kernels used by the linear algebra layer.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The active variant is chosen once at startup from CPU
// feature detection and can be overridden with the GDRC_KERNELS environment
// variable ("scalar" or "avx2") or programmatically via select(). The two
// implementations are equivalence-tested against each other; results may
// differ by floating-point reassociation only.
namespace gdrc::kernels {

enum class Backend { Scalar, Avx2 };

// Active backend. Initialized lazily on first kernel call.
Backend active();

// Force a backend. Throws gdrc::ConfigError if the machine cannot run it.
void select(Backend b);

const char* name(Backend b);

// sum_i x[i]*y[i]
double dot(const double* x, const double* y, std::size_t n);

// sum_i x[i]^2
double norm2sq(const double* x, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// x[i] *= alpha
void scal(double alpha, double* x, std::size_t n);

// Row-major matrix-vector product: y = A x, A is rows x cols.
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);

// Row-major matrix product: C += A * B, A is m x k, B is k x n, C is m x n.
// C must be initialized by the caller (typically zeroed).
void gemm_acc(const double* a, const double* b, double* c,
              std::size_t m, std::size_t k, std::size_t n);

}  // namespace gdrc::kernels
