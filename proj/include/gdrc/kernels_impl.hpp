#pragma once

#include <cstddef>

// Internal: per-backend entry points behind gdrc/kernels.hpp. Not part of the
// public surface.
namespace gdrc::kernels::scalar {
double dot(const double* x, const double* y, std::size_t n);
double norm2sq(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scal(double alpha, double* x, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
void gemm_acc(const double* a, const double* b, double* c,
              std::size_t m, std::size_t k, std::size_t n);
}  // namespace gdrc::kernels::scalar

#if defined(__x86_64__)
namespace gdrc::kernels::avx2 {
double dot(const double* x, const double* y, std::size_t n);
double norm2sq(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scal(double alpha, double* x, std::size_t n);
void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
void gemm_acc(const double* a, const double* b, double* c,
              std::size_t m, std::size_t k, std::size_t n);
}  // namespace gdrc::kernels::avx2
#endif
