#include "gdrc/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "gdrc/error.hpp"
#include "gdrc/kernels_impl.hpp"

namespace gdrc::kernels {

namespace {

bool avx2_available() {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect() {
    if (const char* env = std::getenv("GDRC_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::Avx2;
        return Backend::Scalar;
    }
    return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend> g_backend{detect()};

}  // namespace

Backend active() { return g_backend.load(std::memory_order_relaxed); }

void select(Backend b) {
    if (b == Backend::Avx2 && !avx2_available()) {
        throw ConfigError("avx2 kernels requested but CPU lacks AVX2/FMA");
    }
    g_backend.store(b, std::memory_order_relaxed);
}

const char* name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

#if defined(__x86_64__)
#define GDRC_DISPATCH(fn, ...)                                              \
    (active() == Backend::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define GDRC_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double dot(const double* x, const double* y, std::size_t n) {
    return GDRC_DISPATCH(dot, x, y, n);
}

double norm2sq(const double* x, std::size_t n) { return GDRC_DISPATCH(norm2sq, x, n); }

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    GDRC_DISPATCH(axpy, alpha, x, y, n);
}

void scal(double alpha, double* x, std::size_t n) { GDRC_DISPATCH(scal, alpha, x, n); }

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
    GDRC_DISPATCH(gemv, a, rows, cols, x, y);
}

void gemm_acc(const double* a, const double* b, double* c,
              std::size_t m, std::size_t k, std::size_t n) {
    GDRC_DISPATCH(gemm_acc, a, b, c, m, k, n);
}

#undef GDRC_DISPATCH

}  // namespace gdrc::kernels
