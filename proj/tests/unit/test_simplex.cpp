#include <doctest.h>

#include <random>
#include <sstream>

#include "common/test_support.hpp"
#include "lced/errors.hpp"
#include "lced/lp.hpp"

using namespace lced;
using namespace lced_test;

TEST_CASE("one-variable maximization as min -x") {
    LPInstance lp = LPInstance::with_vars(1);
    lp.c[0] = -1.0;
    lp.lo[0] = 0.0;
    lp.hi[0] = kInf;
    Eigen::VectorXd row(1);
    row << 1.0;
    lp.add_ineq(row, 1.0);
    LPSolution sol = simplex_solve(lp);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x[0] == doctest::Approx(1.0));
    CHECK(sol.objective_value == doctest::Approx(-1.0));
}

TEST_CASE("pricing tie broken toward the lowest index") {
    // min -x - y over x + y <= 1, both reduced costs tie at -1
    LPInstance lp = LPInstance::with_vars(2);
    lp.c << -1.0, -1.0;
    lp.lo.setZero();
    lp.hi.setConstant(kInf);
    Eigen::VectorXd row(2);
    row << 1.0, 1.0;
    lp.add_ineq(row, 1.0);
    LPSolution sol = simplex_solve(lp);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective_value == doctest::Approx(-1.0));
    CHECK(sol.x[0] == doctest::Approx(1.0));
    CHECK(sol.x[1] == doctest::Approx(0.0));

    OracleResult oracle = vertex_enumeration_oracle([&] {
        LPInstance boxed = lp;
        boxed.hi.setConstant(5.0);  // oracle needs a polytope
        return boxed;
    }());
    REQUIRE(oracle.status == SolveStatus::optimal);
    CHECK(sol.objective_value == doctest::Approx(oracle.objective).epsilon(1e-10));
}

TEST_CASE("two-sided bounds and equality rows") {
    // min x - 2y  s.t.  x + y = 3,  1 <= x <= 2,  0 <= y <= 5
    LPInstance lp = LPInstance::with_vars(2);
    lp.c << 1.0, -2.0;
    lp.H.resize(1, 2);
    lp.H << 1.0, 1.0;
    lp.h.resize(1);
    lp.h << 3.0;
    lp.lo << 1.0, 0.0;
    lp.hi << 2.0, 5.0;
    LPSolution sol = simplex_solve(lp);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.x[0] == doctest::Approx(1.0));
    CHECK(sol.x[1] == doctest::Approx(2.0));
    CHECK(check_lp_solution(lp, sol).worst() < 1e-7);
}

TEST_CASE("infeasible and unbounded statuses") {
    LPInstance lp = LPInstance::with_vars(1);
    lp.c[0] = 1.0;
    lp.lo[0] = 0.0;
    lp.hi[0] = 1.0;
    Eigen::VectorXd row(1);
    row << 1.0;
    lp.add_ineq(row, -1.0);  // x <= -1 with x >= 0
    CHECK(simplex_solve(lp).status == SolveStatus::infeasible);

    LPInstance ray = LPInstance::with_vars(2);
    ray.c << -1.0, 0.0;
    ray.lo << 0.0, 0.0;
    ray.hi << kInf, 1.0;
    CHECK(simplex_solve(ray).status == SolveStatus::unbounded);
}

TEST_CASE("Beale cycling example terminates at -0.05") {
    LPSolution sol = simplex_solve(beale_lp());
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective_value == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("warm basis reproduces the optimum") {
    std::mt19937 rng(1234);
    int reused = 0;
    for (int k = 0; k < 50; ++k) {
        LPInstance lp = random_box_lp(rng);
        LPSolution first = simplex_solve(lp);
        if (first.status != SolveStatus::optimal) continue;
        LPSolution second = simplex_solve(lp, first.basis);
        REQUIRE(second.status == SolveStatus::optimal);
        CHECK(second.objective_value == doctest::Approx(first.objective_value).epsilon(1e-9));
        CHECK(second.iterations <= first.iterations);
        ++reused;
    }
    CHECK(reused > 10);
}

TEST_CASE("oracle equivalence on random box LPs") {
    std::mt19937 rng(42);
    int optimal_seen = 0, infeasible_seen = 0;
    for (int k = 0; k < 120; ++k) {
        LPInstance lp = random_box_lp(rng);
        OracleResult oracle = vertex_enumeration_oracle(lp);
        LPSolution sol = simplex_solve(lp);
        REQUIRE(sol.status != SolveStatus::unbounded);  // box bounds
        REQUIRE(to_string(sol.status) == to_string(oracle.status));
        if (oracle.status == SolveStatus::optimal) {
            ++optimal_seen;
            CHECK(std::abs(sol.objective_value - oracle.objective) <= 1e-8);
            CHECK(check_lp_solution(lp, sol).worst() < 1e-6);
        } else {
            ++infeasible_seen;
        }
    }
    CHECK(optimal_seen > 30);
    CHECK(infeasible_seen > 5);
}

TEST_CASE("random degenerate instances terminate") {
    std::mt19937 rng(777);
    for (int k = 0; k < 1000; ++k) {
        LPInstance lp = random_degenerate_lp(rng);
        LPSolution sol = simplex_solve(lp);  // must not throw or hang
        if (sol.status == SolveStatus::optimal)
            CHECK(check_lp_solution(lp, sol).primal < 1e-6);
    }
}

TEST_CASE("dump_lp round-trips the shape") {
    LPInstance lp = LPInstance::with_vars(2);
    lp.c << 1.0, 2.0;
    lp.lo.setZero();
    lp.hi << 1.0, kInf;
    Eigen::VectorXd row(2);
    row << 1.0, 1.0;
    lp.add_ineq(row, 1.5);
    std::ostringstream os;
    dump_lp(lp, os);
    CHECK(os.str().find("vars=2") != std::string::npos);
    CHECK(os.str().find("<= 1.5") != std::string::npos);
}
