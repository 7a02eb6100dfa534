#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gdrc/moments.hpp"
#include "gdrc/rng.hpp"

using namespace gdrc;

TEST_CASE("two-point moments by hand") {
    const std::vector<Vector> pts{{0.0, 0.0}, {2.0, 2.0}};
    MomentProfile p = sample_moments(pts, 0.0);
    CHECK(p.mean[0] == doctest::Approx(1.0));
    CHECK(p.mean[1] == doctest::Approx(1.0));
    // Unbiased divisor: [[2,2],[2,2]]. Singular; regularization is the
    // caller's job before inversion.
    CHECK(p.covariance(0, 0) == doctest::Approx(2.0));
    CHECK(p.covariance(0, 1) == doctest::Approx(2.0));
    CHECK(p.covariance(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("zero spread plus regularization") {
    const std::vector<Vector> pts{{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
    MomentProfile p = sample_moments(pts, 1e-6);
    CHECK(p.mean[0] == doctest::Approx(1.0));
    CHECK(p.covariance(0, 0) == doctest::Approx(1e-6));
    CHECK(p.covariance(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("errors: insufficient data and shape mismatch") {
    CHECK_THROWS_AS(sample_moments({{1.0, 2.0}}, 0.0), InsufficientData);
    CHECK_THROWS_AS(sample_moments({{1.0, 2.0}, {1.0}}, 0.0), ShapeError);
}

TEST_CASE("large gaussian sample recovers identity covariance") {
    // Statistical oracle: two-pass formula cross-checked against an
    // independent single-pass accumulation.
    Rng rng(77);
    const std::size_t n = 2, count = 10000;
    std::vector<Vector> pts(count, Vector(n));
    Vector sum(n, 0.0);
    Matrix raw(n, n);
    for (auto& p : pts) {
        for (std::size_t j = 0; j < n; ++j) {
            p[j] = rng.normal();
            sum[j] += p[j];
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) raw(i, j) += p[i] * p[j];
    }
    MomentProfile prof = sample_moments(pts, 0.0);
    // Single-pass oracle: (raw - N mean mean^T) / (N - 1).
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double mean_i = sum[i] / count, mean_j = sum[j] / count;
            const double oracle = (raw(i, j) - count * mean_i * mean_j) / (count - 1);
            CHECK(prof.covariance(i, j) == doctest::Approx(oracle).epsilon(1e-12));
            const double expect = i == j ? 1.0 : 0.0;
            CHECK(std::abs(prof.covariance(i, j) - expect) < 0.1);
        }
}

TEST_CASE("sample_moments is permutation invariant within 1e-12") {
    Rng rng(5);
    std::vector<Vector> pts(40, Vector(3));
    for (auto& p : pts)
        for (double& v : p) v = 10.0 * rng.normal();
    MomentProfile a = sample_moments(pts, 0.0);
    std::vector<Vector> shuffled = pts;
    rng.shuffle(shuffled);
    MomentProfile b = sample_moments(shuffled, 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.mean[i] == doctest::Approx(b.mean[i]).epsilon(1e-12));
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(a.covariance(i, j) ==
                  doctest::Approx(b.covariance(i, j)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("finalize floors eigenvalues and factors reconstruct") {
    Rng rng(11);
    std::vector<Vector> pts(30, Vector(4));
    for (auto& p : pts)
        for (double& v : p) v = rng.normal();
    MomentProfile prof = sample_moments(pts, 0.0);
    prof.finalize();
    REQUIRE(prof.eigvals.size() == 4);
    CHECK(std::is_sorted(prof.eigvals.rbegin(), prof.eigvals.rend()));
    CHECK(prof.eigvals.back() > 0.0);

    // S S^T = covariance within 1e-10 relative.
    Matrix rec = prof.sqrt_factor * prof.sqrt_factor.transposed();
    rec.add_scaled(prof.covariance, -1.0);
    CHECK(rec.frobenius_norm() / prof.covariance.frobenius_norm() <= 1e-10);

    // U orthogonal.
    Matrix utu = prof.eigvecs.transposed() * prof.eigvecs;
    utu.add_scaled(Matrix::identity(4), -1.0);
    CHECK(utu.frobenius_norm() <= 1e-10);
}

TEST_CASE("sqrt factor split: identity and diagonal cases") {
    {
        std::vector<Vector> pts;  // covariance I_2 via construction
        MomentProfile prof;
        prof.mean = {0.0, 0.0};
        prof.covariance = Matrix::identity(2);
        prof.sample_count = 2;
        prof.finalize();
        SqrtSplit s = split_sqrt_factor(prof, 2);
        CHECK(s.trailing.cols() == 0);
        Matrix rec = s.leading * s.leading.transposed();
        rec.add_scaled(Matrix::identity(2), -1.0);
        CHECK(rec.frobenius_norm() <= 1e-10);
    }
    {
        MomentProfile prof;
        prof.mean = {0.0, 0.0};
        prof.covariance = Matrix::from_rows({{4.0, 0.0}, {0.0, 1.0}});
        prof.sample_count = 2;
        prof.finalize();
        SqrtSplit s = split_sqrt_factor(prof, 1);
        // Leading column is (+-2, 0); leading * leading^T = diag(4, 0).
        Matrix ll = s.leading * s.leading.transposed();
        CHECK(ll(0, 0) == doctest::Approx(4.0));
        CHECK(ll(1, 1) == doctest::Approx(0.0));
        CHECK(std::abs(s.leading(0, 0)) == doctest::Approx(2.0));
    }
}

TEST_CASE("additive split identity on random PD matrices") {
    Rng rng(13);
    Matrix g(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) g(i, j) = rng.normal();
    MomentProfile prof;
    prof.mean.assign(6, 0.0);
    prof.covariance = g * g.transposed();
    for (std::size_t i = 0; i < 6; ++i) prof.covariance(i, i) += 0.3;
    prof.sample_count = 10;
    prof.finalize();

    SqrtSplit s = split_sqrt_factor(prof, 3);
    Matrix rec = s.leading * s.leading.transposed();
    Matrix tail = s.trailing * s.trailing.transposed();
    rec.add_scaled(tail, 1.0);
    rec.add_scaled(prof.covariance, -1.0);
    CHECK(rec.frobenius_norm() / prof.covariance.frobenius_norm() <= 1e-10);

    CHECK_THROWS_AS(split_sqrt_factor(prof, 0), RangeError);
    CHECK_THROWS_AS(split_sqrt_factor(prof, 7), RangeError);
}

TEST_CASE("moments -> eig -> sqrt round-trips the covariance") {
    Rng rng(17);
    std::vector<Vector> pts(50, Vector(5));
    for (auto& p : pts)
        for (double& v : p) v = 3.0 * rng.normal() + 1.0;
    MomentProfile prof = sample_moments(pts, 0.0);
    const Matrix before = prof.covariance;
    prof.finalize();
    Matrix rec = prof.sqrt_factor * prof.sqrt_factor.transposed();
    rec.add_scaled(before, -1.0);
    CHECK(rec.frobenius_norm() / before.frobenius_norm() <= 1e-9);
}
