#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "gdrc/conic/solve.hpp"
#include "gdrc/conic/validate.hpp"
#include "gdrc/rng.hpp"

using namespace gdrc;
using namespace gdrc::conic;

TEST_CASE("min x subject to x >= 3") {
    Program p;
    auto x = p.add_scalar("x");
    p.set_objective(p.v(x));
    p.add_ineq(p.v(x) - 3.0, "lb");
    Solution s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.scalar("x") == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(s.objective == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(validate(p, s, 1e-7).passed);
}

TEST_CASE("infeasible box is reported, not masked") {
    Program p;
    auto x = p.add_scalar("x");
    p.set_objective(p.v(x));
    p.add_ineq(p.v(x) - 3.0, "lb");
    p.add_ineq(-p.v(x) + 2.0, "ub");
    Solution s = solve(p);
    CHECK(s.status == Status::Infeasible);
}

TEST_CASE("unbounded direction is reported") {
    Program p;
    auto x = p.add_scalar("x");
    p.set_objective(p.v(x));
    p.add_ineq(-p.v(x) + 5.0, "ub");
    Solution s = solve(p);
    CHECK(s.status == Status::Unbounded);
}

TEST_CASE("equalities are eliminated exactly") {
    Program p;
    auto x = p.add_vector("x", 3);
    p.set_objective(p.v(x, 0) + p.v(x, 1) + p.v(x, 2));
    p.add_eq(p.v(x, 0) + p.v(x, 1) - 4.0, "sum01");
    p.add_eq(p.v(x, 1) - p.v(x, 2), "tie12");
    p.add_ineq(p.v(x, 1) - 1.0, "lb1");
    p.add_ineq(p.v(x, 0) - 1.0, "lb0");
    Solution s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    // x0 = 4 - x1, objective = 4 + x2 = 4 + x1, minimized at x1 = 1.
    CHECK(s.vector("x")[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s.objective == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(validate(p, s, 1e-6).passed);
}

TEST_CASE("inconsistent equalities are infeasible") {
    Program p;
    auto x = p.add_scalar("x");
    p.set_objective(p.v(x));
    p.add_eq(p.v(x) - 1.0, "a");
    p.add_eq(p.v(x) - 2.0, "b");
    CHECK(solve(p).status == Status::Infeasible);
}

TEST_CASE("min trace X subject to X >= I") {
    Program p;
    auto x = p.add_sym_matrix("X", 2);
    p.set_objective(p.trace(x));
    std::vector<std::vector<LinExpr>> grid(2, std::vector<LinExpr>(2));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = i; j < 2; ++j) {
            grid[i][j] = p.mat_entry(x, i, j);
            if (i == j) grid[i][j] += -1.0;
        }
    p.add_psd_block(std::move(grid), "X-I");
    Solution s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(2.0).epsilon(1e-6));
    Matrix xm = s.sym_matrix("X");
    CHECK(xm(0, 0) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(xm(1, 1) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(validate(p, s, 1e-6).passed);
}

TEST_CASE("1x1 psd block behaves like a sign constraint") {
    Program p;
    auto x = p.add_scalar("x");
    p.set_objective(p.v(x));
    std::vector<std::vector<LinExpr>> grid(1, std::vector<LinExpr>(1));
    grid[0][0] = p.v(x) - 0.5;
    p.add_psd_block(std::move(grid), "x-0.5");
    Solution s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("constant indefinite psd block makes the program infeasible") {
    Program p;
    auto x = p.add_scalar("x");
    p.set_objective(p.v(x));
    p.add_ineq(p.v(x), "x.nonneg");
    std::vector<std::vector<LinExpr>> grid(2, std::vector<LinExpr>(2));
    grid[0][0] = 1.0;
    grid[1][1] = -1.0;
    p.add_psd_block(std::move(grid), "constant");
    CHECK(solve(p).status == Status::Infeasible);
}

TEST_CASE("second-order cone: closest point to an affine target") {
    // min t s.t. ||(x-3, x+1)||_2 <= t: optimum at x = 1, t = 2*sqrt(2)... no:
    // minimizing over x and t jointly gives x = 1, vector (-2, 2), t = 2 sqrt 2.
    Program p;
    auto x = p.add_scalar("x");
    auto t = p.add_scalar("t");
    p.set_objective(p.v(t));
    p.add_soc({p.v(x) - 3.0, p.v(x) + 1.0}, p.v(t), "dist");
    Solution s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.scalar("x") == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(s.objective == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-6));
    CHECK(validate(p, s, 1e-6).passed);
}

TEST_CASE("norm caps match direct norm evaluation on random points") {
    // For each order q, maximize a linear functional under ||x||_q <= 1 and
    // check the optimum equals the dual norm of the functional.
    Rng rng(5);
    for (NormOrder q : {NormOrder::One, NormOrder::Two, NormOrder::Inf}) {
        for (int rep = 0; rep < 3; ++rep) {
            const std::size_t n = 4;
            Vector c(n);
            for (double& v : c) v = rng.normal();
            Program p;
            auto x = p.add_vector("x", n);
            LinExpr obj;
            for (std::size_t i = 0; i < n; ++i) obj += p.v(x, i) * (-c[i]);
            p.set_objective(obj);  // maximize c^T x
            std::vector<LinExpr> arg;
            for (std::size_t i = 0; i < n; ++i) arg.push_back(p.v(x, i));
            p.add_norm_cap(q, std::move(arg), LinExpr(1.0), "ball");
            Solution s = solve(p);
            REQUIRE(s.status == Status::Optimal);
            const double expect = norm_value(c, dual_order(q));
            CHECK(-s.objective == doctest::Approx(expect).epsilon(1e-6));
            // The optimizer's point itself satisfies the cap.
            CHECK(norm_value(s.vector("x"), q) <= 1.0 + 1e-6);
        }
    }
}

TEST_CASE("primary and reference backends agree on random small SDPs") {
    Rng rng(17);
    auto ipm = make_ipm_backend();
    auto ref = make_barrier_backend();
    SolverOptions opts;
    for (int rep = 0; rep < 6; ++rep) {
        const std::size_t n = 3, m = 4;
        Program p;
        auto x = p.add_vector("x", m);
        LinExpr obj;
        for (std::size_t i = 0; i < m; ++i) obj += p.v(x, i) * rng.normal();
        p.set_objective(obj);
        // M0 = I ensures x = 0 is strictly feasible; random symmetric M_i.
        std::vector<std::vector<LinExpr>> grid(n, std::vector<LinExpr>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                LinExpr e = (i == j) ? LinExpr(1.0) : LinExpr(0.0);
                for (std::size_t k = 0; k < m; ++k) e += p.v(x, k) * (0.5 * rng.normal());
                grid[i][j] = std::move(e);
            }
        p.add_psd_block(std::move(grid), "lmi");
        // Keep it bounded.
        std::vector<LinExpr> ball;
        for (std::size_t i = 0; i < m; ++i) ball.push_back(p.v(x, i));
        p.add_norm_cap(NormOrder::Two, std::move(ball), LinExpr(10.0), "trust");

        Solution a = ipm->solve(p, opts);
        Solution b = ref->solve(p, opts);
        REQUIRE(a.status == Status::Optimal);
        REQUIRE(b.status == Status::Optimal);
        CHECK(a.objective ==
              doctest::Approx(b.objective).epsilon(1e-5).scale(1.0 + std::abs(a.objective)));
        CHECK(validate(p, a, 1e-6).passed);
    }
}

TEST_CASE("validate flags a perturbed solution") {
    Program p;
    auto x = p.add_scalar("x");
    p.set_objective(p.v(x));
    p.add_ineq(p.v(x) - 3.0, "lb");
    Solution s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    s.values["x"][0] = 2.9;
    ValidationReport rep = validate(p, s, 1e-6);
    CHECK_FALSE(rep.passed);
    CHECK(rep.worst_ineq == doctest::Approx(-0.1).epsilon(1e-9));
}

TEST_CASE("solve then validate passes at 10x solver tolerance") {
    Rng rng(23);
    for (int rep = 0; rep < 4; ++rep) {
        Program p;
        auto x = p.add_vector("x", 3);
        LinExpr obj;
        for (std::size_t i = 0; i < 3; ++i) obj += p.v(x, i) * rng.normal();
        p.set_objective(obj);
        for (std::size_t i = 0; i < 3; ++i) {
            p.add_ineq(p.v(x, i) + 1.0 + rng.uniform(), "lb" + std::to_string(i));
            p.add_ineq(-p.v(x, i) + 1.0 + rng.uniform(), "ub" + std::to_string(i));
        }
        std::vector<LinExpr> arg{p.v(x, 0) - p.v(x, 1), p.v(x, 2) * 0.5};
        p.add_soc(std::move(arg), p.v(x, 0) + 3.0, "cone");
        Solution s = solve(p, 1e-8);
        REQUIRE(s.status == Status::Optimal);
        CHECK(validate(p, s, 1e-7).passed);
    }
}

TEST_CASE("program dump matches the golden file") {
    Program p;
    auto w = p.add_vector("w", 2);
    auto t = p.add_scalar("t");
    auto lam = p.add_sym_matrix("L", 2);
    p.set_objective(p.v(t) * 0.5 + p.trace(lam));
    p.add_ineq(p.v(w, 0) - p.v(w, 1) + 1.0, "row");
    p.add_soc({p.v(w, 0), p.v(w, 1)}, p.v(t), "cone");
    std::vector<std::vector<LinExpr>> grid(2, std::vector<LinExpr>(2));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = i; j < 2; ++j) grid[i][j] = p.mat_entry(lam, i, j);
    p.add_psd_block(std::move(grid), "psd");
    const std::string dumped = p.dump_json();

    const std::string golden_path = std::string(GDRC_GOLDEN_DIR) + "/program_dump.json";
    std::ifstream in(golden_path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(dumped == buf.str());
}
