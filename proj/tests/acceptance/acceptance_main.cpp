// acceptance suite: one self-contained criterion per entry, each printed as
// a single PASS/FAIL line with its runtime budget. Oracles (vertex
// enumeration, stacked LPs, dense grids) come from tests/common and stay
// independent of the library paths they check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "common/test_support.hpp"
#include "lced/frontier.hpp"
#include "lced/io.hpp"
#include "lced/nash.hpp"

using namespace lced;
using namespace lced_test;

namespace {

struct Report {
    bool pass = true;
    std::vector<std::string> notes;

    void fail(const std::string& why) {
        pass = false;
        notes.push_back(why);
    }
    void note(const std::string& what) { notes.push_back(what); }
    void require(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

// feasibility ledger shared by every criterion that produces dispatches
struct {
    int periods_checked = 0;
    double worst_balance = 0.0;
    double worst_capacity = 0.0;
} g_feas;

HorizonDispatch checked_horizon(const CaseData& c, double lambda, const Norms& norms,
                                int workers = 1) {
    HorizonDispatch hd = solve_horizon(c, lambda, norms, workers);
    for (const auto& pd : hd.periods) {
        DispatchViolations v = check_period_dispatch(c, pd);
        ++g_feas.periods_checked;
        g_feas.worst_balance = std::max(g_feas.worst_balance, v.balance);
        g_feas.worst_capacity =
            std::max({g_feas.worst_capacity, v.ac_flow, v.dc_flow, v.unit_bounds});
    }
    return hd;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// --- criterion bodies -------------------------------------------------------

void criterion_replay(Report& r) {
    NashConfig cfg;  // eps1_rel 1e-4, eps2 0.02, mode both
    SearchOutcome out = dynamic_weight_search_core(replay_evaluator(), cfg);
    const std::vector<double> expected = {0.5, 0.475, 0.4625, 0.45625, 0.453125};
    std::vector<double> got;
    for (const auto& e : out.trace.evaluations)
        if (e.phase == "iteration") got.push_back(e.lambda);
    r.require(out.iterations == 5, "expected 5 iterations, got " + std::to_string(out.iterations));
    r.require(got.size() == expected.size(), "iterate count mismatch");
    for (size_t i = 0; i < expected.size() && i < got.size(); ++i)
        r.require(got[i] == expected[i],
                  "iterate " + std::to_string(i + 1) + " = " + fmt(got[i]) + ", expected exactly " +
                      fmt(expected[i]));
    r.require(out.converged, "search did not converge");
    r.require(out.lambda_star == 0.45625, "lambda* = " + fmt(out.lambda_star));
    r.require(out.F_star == 6.5069e16, "F* = " + fmt(out.F_star));
}

void criterion_nash_product_table(Report& r) {
    NashProblem p{kReplayD1, kReplayD2, kReplayD1, kReplayD2};
    int within = 0;
    double worst = 0.0;
    auto check_row = [&](const TraceRow& row) {
        double computed = nash_product(row.cost * 1e10, row.em * 1e7, p);
        double expected = row.F * 1e16;
        double rel = std::abs(computed - expected) / expected;
        worst = std::max(worst, rel);
        if (rel > 1.5e-3) {
            r.fail("lambda " + fmt(row.lambda) + ": computed " + fmt(computed) + " vs table " +
                   fmt(expected) + " (rel " + fmt(rel) + " > 0.15%)");
        } else {
            ++within;
        }
    };
    for (const auto& row : replay_base_rows()) check_row(row);
    for (const auto& row : replay_iteration_rows()) check_row(row);
    r.note(std::to_string(within) + "/15 rows within 0.15%; the lambda=0.95 row of the "
           "reference table is inconsistent with its own cost/emission columns (every row "
           "matches within 0.13% when the worst-emissions value is taken as 7.19274e7 instead "
           "of the printed 7.1923e7, so the table's F column appears to use unrounded "
           "endpoints)");
}

void criterion_lp_oracle(Report& r) {
    std::mt19937 rng(20240817);
    int optimal = 0, infeasible = 0;
    for (int k = 0; k < 500; ++k) {
        LPInstance lp = random_box_lp(rng);
        OracleResult oracle = vertex_enumeration_oracle(lp);
        LPSolution sol = simplex_solve(lp);
        if (sol.status != oracle.status) {
            r.fail("instance " + std::to_string(k) + ": solver " + to_string(sol.status) +
                   " vs oracle " + to_string(oracle.status));
            continue;
        }
        if (oracle.status == SolveStatus::optimal) {
            ++optimal;
            if (std::abs(sol.objective_value - oracle.objective) > 1e-8)
                r.fail("instance " + std::to_string(k) + ": objective " +
                       fmt(sol.objective_value) + " vs oracle " + fmt(oracle.objective));
        } else {
            ++infeasible;
        }
    }
    r.note("500 instances: " + std::to_string(optimal) + " optimal, " +
           std::to_string(infeasible) + " infeasible");
}

void criterion_exact_vs_scan(Report& r) {
    std::mt19937 rng(5150);
    std::vector<CaseData> cases = {builtin_case("toyC")};
    RandomCaseOptions opt;
    opt.min_nodes = 4;
    opt.max_nodes = 4;
    for (int k = 0; k < 10; ++k) cases.push_back(random_case(rng, opt));

    int compared = 0;
    for (size_t ci = 0; ci < cases.size(); ++ci) {
        const CaseData& c = cases[ci];
        NashProblem p = disagreement_points(c);
        Norms norms{p.cost_norm, p.emission_norm};
        PiecewiseFrontier f = exact_frontier(c, norms);

        r.require(f.segments.front().lambda_lo == 0.0, "case " + std::to_string(ci) +
                                                           ": first region must start at 0");
        r.require(f.segments.back().lambda_hi == 1.0,
                  "case " + std::to_string(ci) + ": last region must end at 1");
        for (size_t i = 0; i + 1 < f.segments.size(); ++i)
            r.require(f.segments[i].lambda_hi == f.segments[i + 1].lambda_lo,
                      "case " + std::to_string(ci) + ": regions must tile [0,1]");

        auto grid = lambda_grid(101);
        auto pts = scan_frontier(c, grid, norms, 4);
        for (const auto& pt : pts) {
            bool on_breakpoint = false;
            for (double b : f.breakpoints)
                if (std::abs(pt.lambda - b) <= 1e-9) on_breakpoint = true;
            if (on_breakpoint) continue;
            ++compared;
            const FrontierSegment& seg = f.segment_at(pt.lambda);
            double crel = std::abs(seg.cost - pt.cost) / (1.0 + std::abs(pt.cost));
            double erel = std::abs(seg.emissions - pt.emissions) / (1.0 + std::abs(pt.emissions));
            if (crel > 1e-6 || erel > 1e-6) {
                r.fail("case " + std::to_string(ci) + " lambda " + fmt(pt.lambda) + ": exact (" +
                       fmt(seg.cost) + ", " + fmt(seg.emissions) + ") vs scan (" + fmt(pt.cost) +
                       ", " + fmt(pt.emissions) + ")");
            }
            for (const auto& pd : checked_horizon(c, pt.lambda, norms).periods) (void)pd;
        }
    }
    r.note(std::to_string(compared) + " off-breakpoint weights compared across " +
           std::to_string(cases.size()) + " cases");
}

void criterion_monotonicity(Report& r) {
    std::mt19937 rng(90210);
    for (int k = 0; k < 20; ++k) {
        CaseData c = random_case(rng);
        NashProblem p = disagreement_points(c);
        Norms norms{p.cost_norm, p.emission_norm};
        std::vector<FrontierPoint> pts(21);
        auto grid = lambda_grid(21);
        for (size_t i = 0; i < grid.size(); ++i) {
            HorizonDispatch hd = checked_horizon(c, grid[i], norms);
            pts[i] = {grid[i], hd.total_cost, hd.total_emissions, 0.0};
        }
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
            double ctol = 1e-6 * (1.0 + std::abs(pts[i].cost));
            double etol = 1e-6 * (1.0 + std::abs(pts[i + 1].emissions));
            if (pts[i].cost < pts[i + 1].cost - ctol)
                r.fail("case " + std::to_string(k) + ": cost increased from lambda " +
                       fmt(pts[i].lambda) + " to " + fmt(pts[i + 1].lambda));
            if (pts[i].emissions > pts[i + 1].emissions + etol)
                r.fail("case " + std::to_string(k) + ": emissions decreased from lambda " +
                       fmt(pts[i].lambda) + " to " + fmt(pts[i + 1].lambda));
        }
        auto dominated = check_dominance(pts);
        if (!dominated.empty())
            r.fail("case " + std::to_string(k) + ": " + std::to_string(dominated.size()) +
                   " dominated scan points");
    }
}

void criterion_decoupling(Report& r) {
    std::mt19937 rng(606);
    RandomCaseOptions opt;
    opt.min_T = 6;
    opt.max_T = 6;
    for (int k = 0; k < 10; ++k) {
        CaseData c = random_case(rng, opt);
        double lambda = k / 9.0;
        HorizonDispatch hd = checked_horizon(c, lambda, Norms{});
        double summed = lambda * hd.total_cost + (1.0 - lambda) * hd.total_emissions;
        LPSolution whole = simplex_solve(stacked_horizon_lp(c, lambda, Norms{}));
        if (whole.status != SolveStatus::optimal) {
            r.fail("case " + std::to_string(k) + ": stacked LP " + to_string(whole.status));
            continue;
        }
        double rel = std::abs(summed - whole.objective_value) / (1.0 + std::abs(summed));
        if (rel > 1e-6)
            r.fail("case " + std::to_string(k) + ": per-period " + fmt(summed) + " vs stacked " +
                   fmt(whole.objective_value));
    }
}

void criterion_affine_invariance(Report& r) {
    const double alpha = 7.3;
    CaseData base = builtin_case("toyC");
    CaseData scaled = base;
    for (auto& u : scaled.units) u.cost_coeff *= alpha;
    auto [r1, t1] = dynamic_weight_search(base);
    auto [r2, t2] = dynamic_weight_search(scaled);

    r.require(t1.evaluations.size() == t2.evaluations.size(), "evaluation counts differ");
    for (size_t i = 0; i < t1.evaluations.size() && i < t2.evaluations.size(); ++i)
        r.require(t1.evaluations[i].lambda == t2.evaluations[i].lambda,
                  "iterate " + std::to_string(i) + " not bitwise identical");
    r.require(r1.lambda_star == r2.lambda_star, "lambda* differs");
    double rel = std::abs(r2.F_star - alpha * r1.F_star) / (alpha * r1.F_star);
    r.require(rel <= 1e-9, "F* scaling off by rel " + fmt(rel));
}

void criterion_degenerate_frontier(Report& r) {
    // closed-form refinement on the exact toyB vertices
    NashProblem exact{5000.0, 100.0, 5000.0, 100.0};
    RefinedPoint rp = segment_refine({1.0, 1000.0, 100.0, 0.0}, {0.0, 5000.0, 20.0, 0.0}, exact);
    r.require(rp.cost == 3000.0 && rp.emissions == 60.0 && rp.F == 80000.0,
              "closed form gave (" + fmt(rp.cost) + ", " + fmt(rp.emissions) + ", " + fmt(rp.F) +
                  "), expected (3000, 60, 80000) exactly");

    // full pipeline: every vertex product vanishes and the flag trips
    CaseData c = builtin_case("toyB");
    auto [result, trace] = dynamic_weight_search(c);
    double f_floor = 1e-9 * result.problem.d1 * result.problem.d2;
    for (const auto& e : trace.evaluations)
        r.require(std::abs(e.F) <= f_floor,
                  "vertex product at lambda " + fmt(e.lambda) + " is " + fmt(e.F));
    r.require(result.degenerate, "degenerate flag did not trip");
    r.require(result.refined.has_value(), "refined point missing");
    if (result.refined) {
        r.require(std::abs(result.refined->cost - 3000.0) <= 1e-6 * 3000.0 &&
                      std::abs(result.refined->emissions - 60.0) <= 1e-6 * 60.0,
                  "pipeline refined point (" + fmt(result.refined->cost) + ", " +
                      fmt(result.refined->emissions) + ")");
    }
    for (const auto& pd : result.dispatch.periods) {
        DispatchViolations v = check_period_dispatch(c, pd);
        ++g_feas.periods_checked;
        g_feas.worst_balance = std::max(g_feas.worst_balance, v.balance);
        g_feas.worst_capacity =
            std::max({g_feas.worst_capacity, v.ac_flow, v.dc_flow, v.unit_bounds});
    }
}

void criterion_carbon_price(Report& r) {
    NashProblem p{kReplayD1, kReplayD2, kReplayD1, kReplayD2};
    auto [ratio, price] = effective_carbon_price(0.45625, p);
    r.require(std::abs(ratio - 1.19178) <= 1e-5,
              "ratio " + fmt(ratio) + " not within 1e-5 of 1.19178");
    r.require(std::abs(price - 967.9) <= 0.5, "conversion " + fmt(price) + " not within 0.5 of 967.9");
    r.note("conversion = ratio * cost_norm / emission_norm = " + fmt(price) +
           " per ton (a published study derives 944 from the same weight under an unstated "
           "convention; see README)");
}

void criterion_feasibility(Report& r) {
    r.require(g_feas.periods_checked > 0, "no dispatches were checked");
    r.require(g_feas.worst_balance <= 1e-6,
              "worst nodal balance residual " + fmt(g_feas.worst_balance) + " MW");
    r.require(g_feas.worst_capacity <= 1e-6,
              "worst capacity violation " + fmt(g_feas.worst_capacity) + " MW");
    r.note(std::to_string(g_feas.periods_checked) + " period dispatches validated, worst balance " +
           fmt(g_feas.worst_balance) + " MW, worst capacity " + fmt(g_feas.worst_capacity) +
           " MW");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<void(Report&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "iteration replay: exact iterate sequence and stop", 1.0, criterion_replay},
        {2, "bargaining objective reproduces the published table within 0.15%", 1.0,
         criterion_nash_product_table},
        {3, "simplex matches vertex enumeration on 500 random LPs", 30.0, criterion_lp_oracle},
        {4, "exact frontier equals dense scans off breakpoints", 60.0, criterion_exact_vs_scan},
        {5, "cost/emissions monotone in the weight, no dominated points", 60.0,
         criterion_monotonicity},
        {6, "per-period solves equal the stacked horizon LP", 30.0, criterion_decoupling},
        {7, "cost rescaling leaves the iterate path bitwise identical", 10.0,
         criterion_affine_invariance},
        {8, "flat frontier: zero vertex products, refined interior point", 1.0,
         criterion_degenerate_frontier},
        {9, "carbon price ratio and physical conversion", 1.0, criterion_carbon_price},
        {10, "every emitted dispatch within 1e-6 MW of feasibility", 0.0, criterion_feasibility},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Report report;
        auto start = std::chrono::steady_clock::now();
        try {
            c.run(report);
        } catch (const std::exception& e) {
            report.fail(std::string("exception: ") + e.what());
        }
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                             .count();
        if (c.limit_s > 0.0 && elapsed > c.limit_s)
            report.fail("runtime " + fmt(elapsed) + "s exceeded " + fmt(c.limit_s) + "s budget");
        std::printf("criterion %2d %s (%.2fs%s)  %s\n", c.id, report.pass ? "PASS" : "FAIL",
                    elapsed, c.limit_s > 0.0 ? (" / " + fmt(c.limit_s) + "s").c_str() : "",
                    c.name);
        for (const auto& line : report.notes)
            std::printf("              - %s\n", line.c_str());
        if (!report.pass) ++failures;
    }
    std::printf("%d/%d criteria passed\n", static_cast<int>(criteria.size()) - failures,
                static_cast<int>(criteria.size()));
    return failures == 0 ? 0 : 1;
}
