#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gdrc/kernels.hpp"
#include "gdrc/kernels_impl.hpp"
#include "gdrc/matrix.hpp"
#include "gdrc/rng.hpp"

using namespace gdrc;

namespace {

Vector random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
    Vector v(n);
    for (double& x : v) x = scale * rng.normal();
    return v;
}

}  // namespace

TEST_CASE("scalar kernels match straightforward definitions") {
    Rng rng(7);
    const Vector x = random_vec(rng, 37), y = random_vec(rng, 37);
    double expect = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) expect += x[i] * y[i];
    CHECK(kernels::scalar::dot(x.data(), y.data(), x.size()) == doctest::Approx(expect));
    CHECK(kernels::scalar::norm2sq(x.data(), x.size()) ==
          doctest::Approx(kernels::scalar::dot(x.data(), x.data(), x.size())));
}

#if defined(__x86_64__)
TEST_CASE("avx2 kernels agree with the scalar reference") {
    if (!(__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))) return;
    Rng rng(11);
    // Deliberately awkward lengths to cover every remainder path.
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 64u, 129u, 1000u}) {
        const Vector x = random_vec(rng, n, 3.0), y = random_vec(rng, n, 2.0);

        const double d_ref = kernels::scalar::dot(x.data(), y.data(), n);
        const double d_simd = kernels::avx2::dot(x.data(), y.data(), n);
        CHECK(std::abs(d_ref - d_simd) <= 1e-12 * (1.0 + std::abs(d_ref)));

        const double n_ref = kernels::scalar::norm2sq(x.data(), n);
        const double n_simd = kernels::avx2::norm2sq(x.data(), n);
        CHECK(std::abs(n_ref - n_simd) <= 1e-12 * (1.0 + n_ref));

        Vector a = y, b = y;
        kernels::scalar::axpy(0.37, x.data(), a.data(), n);
        kernels::avx2::axpy(0.37, x.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));

        a = x;
        b = x;
        kernels::scalar::scal(-1.75, a.data(), n);
        kernels::avx2::scal(-1.75, b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);
    }
}

TEST_CASE("avx2 gemm/gemv agree with the scalar reference") {
    if (!(__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))) return;
    Rng rng(13);
    for (auto [m, k, n] : {std::tuple<std::size_t, std::size_t, std::size_t>{1, 1, 1},
                           {3, 5, 2},
                           {8, 8, 8},
                           {13, 7, 9},
                           {32, 17, 33}}) {
        Vector a = random_vec(rng, m * k), b = random_vec(rng, k * n);
        Vector c_ref(m * n, 0.0), c_simd(m * n, 0.0);
        kernels::scalar::gemm_acc(a.data(), b.data(), c_ref.data(), m, k, n);
        kernels::avx2::gemm_acc(a.data(), b.data(), c_simd.data(), m, k, n);
        for (std::size_t i = 0; i < m * n; ++i)
            CHECK(std::abs(c_ref[i] - c_simd[i]) <= 1e-12 * (1.0 + std::abs(c_ref[i])));

        Vector x = random_vec(rng, k), y_ref(m), y_simd(m);
        kernels::scalar::gemv(a.data(), m, k, x.data(), y_ref.data());
        kernels::avx2::gemv(a.data(), m, k, x.data(), y_simd.data());
        for (std::size_t i = 0; i < m; ++i)
            CHECK(std::abs(y_ref[i] - y_simd[i]) <= 1e-12 * (1.0 + std::abs(y_ref[i])));
    }
}
#endif

TEST_CASE("backend selection is observable and reversible") {
    const auto original = kernels::active();
    kernels::select(kernels::Backend::Scalar);
    CHECK(kernels::active() == kernels::Backend::Scalar);
    Vector x{1.0, 2.0, 3.0}, y{4.0, 5.0, 6.0};
    CHECK(kernels::dot(x.data(), y.data(), 3) == doctest::Approx(32.0));
    kernels::select(original);
    CHECK(kernels::active() == original);
}
