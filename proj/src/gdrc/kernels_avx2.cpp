#include "gdrc/kernels_impl.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

namespace gdrc::kernels::avx2 {

namespace {

inline double hsum256(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    double acc = hsum256(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double norm2sq(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
    }
    double acc = hsum256(acc0);
    for (; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal(double alpha, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) x[i] *= alpha;
}

void gemv(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) {
        y[i] = dot(a + i * cols, x, cols);
    }
}

void gemm_acc(const double* a, const double* b, double* c,
              std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = arow[p];
            if (aip == 0.0) continue;
            const __m256d va = _mm256_set1_pd(aip);
            const double* brow = b + p * n;
            std::size_t j = 0;
            for (; j + 8 <= n; j += 8) {
                _mm256_storeu_pd(crow + j,
                                 _mm256_fmadd_pd(va, _mm256_loadu_pd(brow + j),
                                                 _mm256_loadu_pd(crow + j)));
                _mm256_storeu_pd(crow + j + 4,
                                 _mm256_fmadd_pd(va, _mm256_loadu_pd(brow + j + 4),
                                                 _mm256_loadu_pd(crow + j + 4)));
            }
            for (; j + 4 <= n; j += 4) {
                _mm256_storeu_pd(crow + j,
                                 _mm256_fmadd_pd(va, _mm256_loadu_pd(brow + j),
                                                 _mm256_loadu_pd(crow + j)));
            }
            for (; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
}

}  // namespace gdrc::kernels::avx2

#endif  // __x86_64__
