#include <doctest.h>

#include <random>

#include "common/test_support.hpp"
#include "lced/nash.hpp"

using namespace lced;
using namespace lced_test;

TEST_CASE("replayed trace reproduces the published iterate sequence exactly") {
    NashConfig cfg;
    SearchOutcome out = dynamic_weight_search_core(replay_evaluator(), cfg);
    REQUIRE(out.converged);
    CHECK(out.degenerate == false);
    CHECK(out.iterations == 5);

    std::vector<double> iterates;
    for (const auto& e : out.trace.evaluations)
        if (e.phase == "iteration") iterates.push_back(e.lambda);
    const std::vector<double> expected = {0.5, 0.475, 0.4625, 0.45625, 0.453125};
    REQUIRE(iterates.size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i) CHECK(iterates[i] == expected[i]);

    CHECK(out.lambda_star == 0.45625);
    CHECK(out.F_star == 6.5069e16);
    REQUIRE(out.converged_by.size() == 2);  // both criteria fire on the last check
}

TEST_CASE("convergence criteria fail through iteration 4 and pass at 5") {
    NashConfig cfg;
    SearchOutcome out = dynamic_weight_search_core(replay_evaluator(), cfg);
    // one top-two record per convergence check: after the base grid and
    // after each of the five iterations
    REQUIRE(out.trace.top_two.size() == 6);
    for (size_t k = 0; k + 1 < out.trace.top_two.size(); ++k) {
        auto [l1, l2] = out.trace.top_two[k];
        double ratio_gap = std::abs((1.0 - l1) / l1 - (1.0 - l2) / l2);
        double f1 = 0.0, f2 = 0.0;
        for (const auto& e : out.trace.evaluations) {
            if (e.lambda == l1) f1 = e.F;
            if (e.lambda == l2) f2 = e.F;
        }
        bool both = std::abs(f1 - f2) <= cfg.eps1_rel * f1 && ratio_gap <= cfg.eps2;
        CHECK(!both);
    }
    auto [l1, l2] = out.trace.top_two.back();
    CHECK(l1 == 0.45625);
    CHECK(l2 == 0.453125);
    CHECK(std::abs((1.0 - l1) / l1 - (1.0 - l2) / l2) ==
          doctest::Approx(0.0151).epsilon(0.01));
    // final F gap: (6.5069 - 6.5063) / 6.5069 = 9.2e-5, inside eps1_rel
    CHECK((6.5069e16 - 6.5063e16) / 6.5069e16 ==
          doctest::Approx(9.2e-5).epsilon(0.01));
}

TEST_CASE("bargaining objective reproduces the published F values") {
    NashProblem p{kReplayD1, kReplayD2, kReplayD1, kReplayD2};
    // spot values quoted to 5 digits in the reference table
    CHECK(nash_product(5.0390e10, 6.3813e7, p) ==
          doctest::Approx(6.5039e16).epsilon(1e-3));
    CHECK(nash_product(4.9460e10, 6.4779e7, p) ==
          doctest::Approx(6.3939e16).epsilon(1e-3));
    CHECK(nash_product(kReplayD1, 123.0, p) == 0.0);  // cost at the disagreement value
}

TEST_CASE("disagreement points are lexicographic Pareto endpoints") {
    SUBCASE("toyA single point") {
        NashProblem p = disagreement_points(builtin_case("toyA"));
        CHECK(p.d1 == doctest::Approx(500.0).epsilon(1e-6));
        CHECK(p.d2 == doctest::Approx(50.0).epsilon(1e-6));
    }
    SUBCASE("toyB analytic endpoints") {
        NashProblem p = disagreement_points(builtin_case("toyB"));
        CHECK(p.d1 == doctest::Approx(5000.0).epsilon(1e-6));
        CHECK(p.d2 == doctest::Approx(100.0).epsilon(1e-6));
    }
    SUBCASE("cost ties are broken by the secondary objective") {
        // two units with equal cost but different emissions: the pure-cost
        // solve is a flat face, the lexicographic pass must pick the cleaner
        // unit so d2 stays undominated
        CaseData c;
        c.nodes = {{0, "n0"}};
        c.units = {{0, 0, UnitKind::thermal, 10.0, 1.0, 0.0, 100.0},
                   {1, 0, UnitKind::gas, 10.0, 0.5, 0.0, 100.0}};
        c.load_map[{0, 0}] = 100.0;
        c.horizon = 1;
        DisagreementInfo info = compute_disagreement(c);
        CHECK(info.problem.d2 == doctest::Approx(50.0).epsilon(1e-6));
        CHECK(info.endpoint1.cost == doctest::Approx(1000.0).epsilon(1e-6));
    }
}

TEST_CASE("segment refinement closed form") {
    NashProblem p{5000.0, 100.0, 5000.0, 100.0};
    FrontierPoint a{1.0, 1000.0, 100.0, 0.0};
    FrontierPoint b{0.0, 5000.0, 20.0, 0.0};
    SUBCASE("flat-frontier rescue lands mid-segment") {
        RefinedPoint r = segment_refine(a, b, p);
        CHECK(r.s == 0.5);
        CHECK(r.cost == 3000.0);
        CHECK(r.emissions == 60.0);
        CHECK(r.F == 80000.0);
    }
    SUBCASE("identical vertices stay put") {
        RefinedPoint r = segment_refine(a, a, p);
        CHECK(r.s == 0.0);
        CHECK(r.cost == a.cost);
        CHECK(r.F == 0.0);
    }
    SUBCASE("stationary point left of the segment clamps to zero") {
        // gains (u0,v0) = (4000, 80) at s=0 shrinking in both coordinates
        FrontierPoint aa{0.0, 1000.0, 20.0, 0.0};
        FrontierPoint bb{1.0, 1400.0, 30.0, 0.0};
        RefinedPoint r = segment_refine(aa, bb, p);
        CHECK(r.s == 0.0);
        CHECK(r.cost == aa.cost);
    }
}

TEST_CASE("carbon price ratio and physical conversion") {
    NashProblem p{kReplayD1, kReplayD2, kReplayD1, kReplayD2};
    SUBCASE("even weights price at parity") {
        auto [ratio, price] = effective_carbon_price(0.5, p);
        CHECK(ratio == doctest::Approx(1.0));
        CHECK(price == doctest::Approx(kReplayD1 / kReplayD2));
    }
    SUBCASE("published equilibrium weight") {
        auto [ratio, price] = effective_carbon_price(0.45625, p);
        CHECK(ratio == doctest::Approx(1.19178).epsilon(1e-5));
        CHECK(price == doctest::Approx(967.9).epsilon(5e-4));
    }
    SUBCASE("zero weight is an error") {
        CHECK_THROWS_AS(effective_carbon_price(0.0, p), std::invalid_argument);
    }
}

TEST_CASE("toyA collapses to the degenerate flag") {
    auto [result, trace] = dynamic_weight_search(builtin_case("toyA"));
    CHECK(result.degenerate);
    CHECK(result.F_star == doctest::Approx(0.0).scale(500.0 * 50.0));
    CHECK(result.iterations == 0);
    for (const auto& e : trace.evaluations)
        CHECK(e.F >= -1e-9 * (1.0 + std::abs(e.cost) * std::abs(e.emissions)));
}

TEST_CASE("toyB flat frontier: refinement rescues the interior optimum") {
    auto [result, trace] = dynamic_weight_search(builtin_case("toyB"));
    CHECK(result.degenerate);
    REQUIRE(result.refined.has_value());
    CHECK(result.refined->cost == doctest::Approx(3000.0).epsilon(1e-6));
    CHECK(result.refined->emissions == doctest::Approx(60.0).epsilon(1e-6));
    CHECK(result.refined->F == doctest::Approx(80000.0).epsilon(1e-6));
    // endpoint evaluations carry an exactly-zero bargaining objective
    CHECK(trace.evaluations[0].phase == "endpoint");
    CHECK(trace.evaluations[0].F == 0.0);
    CHECK(trace.evaluations[1].F == 0.0);
}

TEST_CASE("toyC search lands on the dense-grid argmax region") {
    CaseData c = builtin_case("toyC");
    NashConfig cfg;
    cfg.workers = 4;
    auto [result, trace] = dynamic_weight_search(c, cfg);
    REQUIRE(result.converged);
    CHECK(!result.degenerate);

    NashProblem p = result.problem;
    Norms norms{p.cost_norm, p.emission_norm};
    auto grid = lambda_grid(10001);
    auto pts = scan_frontier(c, grid, norms, 4);
    double best_f = -1.0;
    for (const auto& pt : pts) best_f = std::max(best_f, nash_product(pt.cost, pt.emissions, p));
    double nearest = 1.0;
    for (const auto& pt : pts) {
        if (nash_product(pt.cost, pt.emissions, p) >= best_f * (1.0 - 1e-12))
            nearest = std::min(nearest, std::abs(pt.lambda - result.lambda_star));
    }
    CHECK(nearest <= 0.01);
    CHECK(result.F_star == doctest::Approx(best_f).epsilon(1e-9));

    // grid-level refinement cannot beat the search's refined point by more
    // than tolerance
    REQUIRE(result.refined.has_value());
    std::vector<FrontierPoint> distinct;
    for (const auto& pt : pts) {
        if (distinct.empty() ||
            std::abs(distinct.back().cost - pt.cost) > 1e-9 * (1.0 + pt.cost))
            distinct.push_back(pt);
    }
    double oracle_refined = 0.0;
    for (size_t i = 0; i + 1 < distinct.size(); ++i)
        oracle_refined =
            std::max(oracle_refined, segment_refine(distinct[i], distinct[i + 1], p).F);
    CHECK(result.refined->F >= oracle_refined * (1.0 - 1e-6));

    // base-grid incumbent is never discarded
    double base_best = 0.0;
    for (const auto& e : trace.evaluations)
        if (e.phase == "base") base_best = std::max(base_best, e.F);
    CHECK(result.F_star >= base_best);
}

TEST_CASE("scaling every cost coefficient leaves the iterate path identical") {
    const double alpha = 7.3;
    CaseData base = builtin_case("toyC");
    CaseData scaled = base;
    for (auto& u : scaled.units) u.cost_coeff *= alpha;

    auto [r1, t1] = dynamic_weight_search(base);
    auto [r2, t2] = dynamic_weight_search(scaled);

    REQUIRE(t1.evaluations.size() == t2.evaluations.size());
    for (size_t i = 0; i < t1.evaluations.size(); ++i) {
        CHECK(t1.evaluations[i].lambda == t2.evaluations[i].lambda);  // bitwise
        CHECK(t1.evaluations[i].phase == t2.evaluations[i].phase);
    }
    CHECK(r1.lambda_star == r2.lambda_star);
    CHECK(r2.F_star == doctest::Approx(alpha * r1.F_star).epsilon(1e-9));
    CHECK(r2.carbon_ratio == r1.carbon_ratio);
}

TEST_CASE("either-mode can stop earlier than both-mode") {
    // two neighbouring base weights whose ratio gap is already inside eps2
    // but whose F gap is not
    auto stub = [](double lambda) -> EvalPoint {
        if (std::abs(lambda - 0.5) < 1e-9) return {1.0, 1.0, 10.0};
        if (std::abs(lambda - 0.505) < 1e-9) return {1.0, 1.0, 9.0};
        return {1.0, 1.0, 1.0 - std::abs(lambda - 0.5)};
    };
    NashConfig cfg;
    cfg.base_grid = {0.4, 0.5, 0.505, 0.6};
    cfg.max_iters = 3;

    cfg.mode = ConvergenceMode::either;
    SearchOutcome either = dynamic_weight_search_core(stub, cfg);
    CHECK(either.converged);
    CHECK(either.iterations == 0);
    CHECK(either.converged_by == std::vector<std::string>{"weight_ratio"});

    cfg.mode = ConvergenceMode::both;
    SearchOutcome both = dynamic_weight_search_core(stub, cfg);
    CHECK(both.iterations > 0);
}

TEST_CASE("midpoint duplicate guard makes plateaued searches terminate") {
    // flat top at the two outer weights with a pit between them: every
    // midpoint re-lands on evaluated weights until the guard halves toward
    // the leader
    auto stub = [](double lambda) -> EvalPoint {
        bool peak = std::abs(lambda - 0.25) < 1e-9 || std::abs(lambda - 0.75) < 1e-9;
        return {1.0, 1.0, peak ? 5.0 : 1.0};
    };
    NashConfig cfg;
    cfg.base_grid = {0.25, 0.75};
    cfg.max_iters = 10;
    SearchOutcome out = dynamic_weight_search_core(stub, cfg);
    CHECK(out.lambda_star == 0.25);  // ties break toward the smaller weight
    CHECK(out.F_star == 5.0);
    CHECK(!out.converged);  // ratio gap между 0.25 and 0.75 never closes
}
