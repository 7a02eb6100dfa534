#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gdrc/bench.hpp"
#include "gdrc/core_set.hpp"
#include "gdrc/rng.hpp"

using namespace gdrc;

namespace {

CoreSet random_core_set(Rng& rng, std::size_t n, NormOrder p) {
    Vector center(n);
    for (double& v : center) v = rng.normal();
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 3.0;  // keep well conditioned
    return make_core_set(center, a, 0.5 + rng.uniform(), p, 100.0);
}

// Monte-Carlo support oracle: max of v^T x over sampled boundary points
// x = center + A z, ||z||_p = sqrt(radius_sq).
double mc_support(const CoreSet& y, const Vector& v, Rng& rng, int samples) {
    const std::size_t n = y.dim();
    double best = -1e300;
    Vector z(n);
    for (int s = 0; s < samples; ++s) {
        for (double& c : z) c = rng.normal();
        const double nz = norm_value(z, y.norm_order);
        const double scale = std::sqrt(y.radius_sq) / nz;
        double acc = dot(y.center, v);
        for (std::size_t i = 0; i < n; ++i) {
            double az = 0.0;
            for (std::size_t j = 0; j < n; ++j) az += y.perturbation(i, j) * z[j] * scale;
            acc += v[i] * az;
        }
        best = std::max(best, acc);
    }
    return best;
}

}  // namespace

TEST_CASE("support function closed form basics") {
    // Unit 2-ball at the origin: delta*(v) = ||v||_2.
    CoreSet y = make_core_set(Vector{0.0, 0.0}, Matrix::identity(2), 1.0, NormOrder::Two, 1.0);
    CHECK(support_function(y, {0.0, 0.0}) == 0.0);
    CHECK(support_function(y, {3.0, 4.0}) == doctest::Approx(5.0));
}

TEST_CASE("support function matches the Monte-Carlo oracle") {
    Rng rng(2024);
    for (NormOrder p : {NormOrder::Two}) {
        for (int rep = 0; rep < 8; ++rep) {
            CoreSet y = random_core_set(rng, 4, p);
            Vector v(4);
            for (double& c : v) c = rng.normal();
            const double closed = support_function(y, v);
            const double mc = mc_support(y, v, rng, 100000);
            CHECK(mc <= closed + 1e-9 * std::abs(closed));
            CHECK(closed == doctest::Approx(mc).epsilon(1e-3));
        }
    }
    // p = 1 and inf: the balls are polytopes, so the support is attained at
    // a vertex; enumerating vertices gives an exact independent oracle.
    for (NormOrder p : {NormOrder::One, NormOrder::Inf}) {
        for (int rep = 0; rep < 6; ++rep) {
            CoreSet y = random_core_set(rng, 4, p);
            Vector v(4);
            for (double& c : v) c = rng.normal();
            const double closed = support_function(y, v);

            const double rho = std::sqrt(y.radius_sq);
            double best = -1e300;
            auto eval_vertex = [&](const Vector& z) {
                double acc = dot(y.center, v);
                for (std::size_t i = 0; i < 4; ++i) {
                    double az = 0.0;
                    for (std::size_t j = 0; j < 4; ++j) az += y.perturbation(i, j) * z[j];
                    acc += v[i] * az;
                }
                best = std::max(best, acc);
            };
            if (p == NormOrder::One) {
                // cross-polytope: vertices +-rho e_i
                for (std::size_t i = 0; i < 4; ++i)
                    for (double sgn : {1.0, -1.0}) {
                        Vector z(4, 0.0);
                        z[i] = sgn * rho;
                        eval_vertex(z);
                    }
            } else {
                // hypercube: all sign patterns of rho
                for (int mask = 0; mask < 16; ++mask) {
                    Vector z(4);
                    for (std::size_t i = 0; i < 4; ++i)
                        z[i] = (mask >> i & 1) ? rho : -rho;
                    eval_vertex(z);
                }
            }
            CHECK(closed == doctest::Approx(best).epsilon(1e-10));
        }
    }
}

TEST_CASE("support function is positively homogeneous and subadditive") {
    Rng rng(9);
    CoreSet y = random_core_set(rng, 5, NormOrder::Two);
    for (int rep = 0; rep < 20; ++rep) {
        Vector v(5), w(5);
        for (double& c : v) c = rng.normal();
        for (double& c : w) c = rng.normal();
        const double alpha = 2.0 * rng.uniform();
        Vector av(5), vw(5);
        for (std::size_t i = 0; i < 5; ++i) {
            av[i] = alpha * v[i];
            vw[i] = v[i] + w[i];
        }
        CHECK(support_function(y, av) ==
              doctest::Approx(alpha * support_function(y, v)).epsilon(1e-9));
        CHECK(support_function(y, vw) <=
              support_function(y, v) + support_function(y, w) + 1e-9);
    }
}

TEST_CASE("membership duality: v^T x <= support for sampled members") {
    Rng rng(31);
    CoreSet y = random_core_set(rng, 3, NormOrder::Two);
    for (int rep = 0; rep < 200; ++rep) {
        Vector z(3), x(3);
        for (double& c : z) c = rng.normal();
        const double nz = norm2(z);
        const double scale = rng.uniform() * std::sqrt(y.radius_sq) / nz;
        for (std::size_t i = 0; i < 3; ++i) {
            x[i] = y.center[i];
            for (std::size_t j = 0; j < 3; ++j) x[i] += y.perturbation(i, j) * z[j] * scale;
        }
        REQUIRE(y.contains(x));
        Vector v(3);
        for (double& c : v) c = rng.normal();
        CHECK(dot(v, x) <= support_function(y, v) + 1e-9);
    }
}

TEST_CASE("biconjugate bound flag") {
    CoreSet y = make_core_set(Vector{0.0, 0.0}, Matrix::identity(2), 1.0, NormOrder::One, 3.0);
    // p=1 means q=inf.
    CHECK(biconjugate_bound(y, 1.0, {0.0, 0.0}));
    CHECK(biconjugate_bound(y, 1.0, {2.0, -3.0}));   // ||v||_inf = 3 = r theta
    CHECK_FALSE(biconjugate_bound(y, 1.0, {2.0, -3.1}));
    // Zero attention forbids any nonzero dual.
    CoreSet z = make_core_set(Vector{0.0, 0.0}, Matrix::identity(2), 1.0, NormOrder::One, 0.0);
    CHECK_FALSE(biconjugate_bound(z, 5.0, {1e-9, 0.0}));
    CHECK(biconjugate_bound(z, 5.0, {0.0, 0.0}));
}

TEST_CASE("core set calibration: minimal radius with mean containment") {
    Rng rng(45);
    Dataset d = bench::gaussian_generator(2, 40, 1.0, 1.0, 99);
    MomentProfile prof[2];
    for (int k = 0; k < 2; ++k) {
        prof[k] = sample_moments(d.class_points(k), 0.0);
        prof[k].finalize();
    }
    AmbiguityConfig cfg;
    cfg.lambda = 0.2;
    cfg.containment_fraction = 0.1;
    CoreSets cs = build_core_sets(prof[0], prof[1], d, cfg);

    for (int k = 0; k < 2; ++k) {
        REQUIRE(cs.per_class[k].size() == 1);
        const CoreSet& y = cs.per_class[k][0];
        // lambda interpolation of the means.
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(y.center[i] == doctest::Approx(0.8 * prof[k].mean[i] +
                                                 0.2 * prof[1 - k].mean[i]));

        // Brute-force check: containment holds at the returned radius and
        // fails if the radius shrinks by a relative 1e-9.
        const auto pts = d.class_points(k);
        const std::size_t want =
            static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(pts.size())));
        std::size_t inside = 0, inside_shrunk = 0;
        CoreSet shrunk = y;
        shrunk.radius_sq *= 1.0 - 1e-9;
        for (const auto& p : pts) {
            if (y.contains(p)) ++inside;
            if (shrunk.contains(p)) ++inside_shrunk;
        }
        const bool mean_in = y.contains(prof[k].mean);
        const bool mean_in_shrunk = shrunk.contains(prof[k].mean);
        CHECK(inside >= want);
        CHECK(mean_in);
        CHECK((inside_shrunk < want || !mean_in_shrunk));
    }
}

TEST_CASE("lambda zero keeps centers at the class means") {
    Dataset d = bench::gaussian_generator(3, 30, 1.0, 2.0, 7);
    MomentProfile prof[2];
    for (int k = 0; k < 2; ++k) {
        prof[k] = sample_moments(d.class_points(k), 0.0);
        prof[k].finalize();
    }
    AmbiguityConfig cfg;
    cfg.lambda = 0.0;
    CoreSets cs = build_core_sets(prof[0], prof[1], d, cfg);
    for (int k = 0; k < 2; ++k) {
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(cs.per_class[k][0].center[i] == doctest::Approx(prof[k].mean[i]));
        CHECK(cs.per_class[k][0].contains(prof[k].mean));
    }
}

TEST_CASE("config validation") {
    AmbiguityConfig cfg;
    cfg.lambda = 0.5;
    CHECK_THROWS_AS(cfg.check(), ConfigError);
    cfg.lambda = 0.2;
    cfg.epsilon = 1.0;
    CHECK_THROWS_AS(cfg.check(), ConfigError);
    cfg.epsilon = 0.05;
    cfg.gamma2 = 0.5;
    CHECK_THROWS_AS(cfg.check(), ConfigError);
}

TEST_CASE("multiple core sets per class all contain the mean") {
    Dataset d = bench::gaussian_generator(2, 60, 1.0, 1.0, 3);
    MomentProfile prof[2];
    for (int k = 0; k < 2; ++k) {
        prof[k] = sample_moments(d.class_points(k), 0.0);
        prof[k].finalize();
    }
    AmbiguityConfig cfg;
    cfg.lambda = 0.3;
    cfg.m_per_class = 3;
    CoreSets cs = build_core_sets(prof[0], prof[1], d, cfg);
    for (int k = 0; k < 2; ++k) {
        REQUIRE(cs.per_class[k].size() == 3);
        for (const auto& y : cs.per_class[k]) CHECK(y.contains(prof[k].mean));
    }
}
