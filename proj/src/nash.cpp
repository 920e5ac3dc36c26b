#include "lced/nash.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>

#include "lced/errors.hpp"
#include "lced/util.hpp"

namespace lced {

NashConfig::NashConfig() {
    for (int i = 0; i < 10; ++i) base_grid.push_back((1 + 2 * i) / 20.0);
}

namespace {

struct LexPoint {
    double cost = 0.0;
    double emissions = 0.0;
};

/// Lexicographic endpoint: optimize the primary objective, then pin it with
/// an added row (relative slack 1e-9) and optimize the secondary.
LexPoint lexicographic_endpoint(const CaseData& c, bool cost_primary, int workers) {
    std::vector<LexPoint> per_period(c.horizon);
    std::vector<int> infeasible(c.horizon, 0);
    parallel_for(c.horizon, workers, [&](int t) {
        auto [lp, vm] = build_period_lp(c, t, cost_primary ? 1.0 : 0.0, Norms{});
        auto [cost_vec, emis_vec] = objective_vectors(c, vm);
        const Eigen::VectorXd& primary = cost_primary ? cost_vec : emis_vec;
        const Eigen::VectorXd& secondary = cost_primary ? emis_vec : cost_vec;

        LPSolution first = simplex_solve(lp);
        if (first.status != SolveStatus::optimal) {
            infeasible[t] = 1;
            return;
        }
        LPInstance second_lp = lp;
        second_lp.c = secondary;
        second_lp.add_ineq(primary, first.objective_value * (1.0 + 1e-9) + 1e-12);
        LPSolution second = simplex_solve(second_lp);
        if (second.status != SolveStatus::optimal) {
            infeasible[t] = 1;
            return;
        }
        per_period[t] = {cost_vec.dot(second.x), emis_vec.dot(second.x)};
    });
    std::vector<int> bad;
    for (int t = 0; t < c.horizon; ++t)
        if (infeasible[t]) bad.push_back(t);
    if (!bad.empty()) throw InfeasibleError(bad);

    LexPoint total;
    for (const auto& p : per_period) {
        total.cost += p.cost;
        total.emissions += p.emissions;
    }
    return total;
}

double weight_ratio(double lambda) { return (1.0 - lambda) / lambda; }

}  // namespace

DisagreementInfo compute_disagreement(const CaseData& c, int workers) {
    DisagreementInfo info;
    LexPoint at0 = lexicographic_endpoint(c, /*cost_primary=*/false, workers);
    LexPoint at1 = lexicographic_endpoint(c, /*cost_primary=*/true, workers);
    info.endpoint0 = {0.0, at0.cost, at0.emissions, 0.0};
    info.endpoint1 = {1.0, at1.cost, at1.emissions, 0.0};
    info.problem.d1 = at0.cost;
    info.problem.d2 = at1.emissions;
    info.problem.cost_norm = at0.cost > 0.0 ? at0.cost : 1.0;
    info.problem.emission_norm = at1.emissions > 0.0 ? at1.emissions : 1.0;
    return info;
}

NashProblem disagreement_points(const CaseData& c, int workers) {
    return compute_disagreement(c, workers).problem;
}

double nash_product(double cost, double emissions, const NashProblem& problem) {
    return (problem.d1 - cost) * (problem.d2 - emissions);
}

RefinedPoint segment_refine(const FrontierPoint& a, const FrontierPoint& b,
                            const NashProblem& problem) {
    double u0 = problem.d1 - a.cost;
    double v0 = problem.d2 - a.emissions;
    double du = a.cost - b.cost;       // u(s) = u0 + s*du
    double dv = a.emissions - b.emissions;
    double s = 0.0;
    if (du * dv < 0.0) {  // strictly concave quadratic, interior stationary point
        s = std::clamp(-(du * v0 + dv * u0) / (2.0 * du * dv), 0.0, 1.0);
    } else if (du != 0.0 || dv != 0.0) {
        double f0 = u0 * v0;
        double f1 = (u0 + du) * (v0 + dv);
        s = f1 > f0 ? 1.0 : 0.0;
    }
    RefinedPoint r;
    r.s = s;
    r.cost = (1.0 - s) * a.cost + s * b.cost;
    r.emissions = (1.0 - s) * a.emissions + s * b.emissions;
    r.F = nash_product(r.cost, r.emissions, problem);
    return r;
}

std::pair<double, double> effective_carbon_price(double lambda, const NashProblem& problem) {
    if (lambda <= 0.0 || lambda > 1.0)
        throw std::invalid_argument("carbon price needs lambda in (0, 1]");
    double ratio = weight_ratio(lambda);
    return {ratio, ratio * problem.cost_norm / problem.emission_norm};
}

SearchOutcome dynamic_weight_search_core(const Evaluator& eval, const NashConfig& cfg) {
    if (cfg.base_grid.empty()) throw std::invalid_argument("empty base grid");
    for (double l : cfg.base_grid)
        if (l <= 0.0 || l >= 1.0)
            throw std::invalid_argument("base grid weights must lie strictly inside (0, 1)");

    SearchOutcome out;
    std::vector<double> grid = cfg.base_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto& evals = out.trace.evaluations;
    std::vector<EvalPoint> base_points(grid.size());
    parallel_for(static_cast<int>(grid.size()), cfg.workers,
                 [&](int i) { base_points[i] = eval(grid[i]); });
    for (size_t i = 0; i < grid.size(); ++i)
        evals.push_back({grid[i], base_points[i].cost, base_points[i].emissions,
                         base_points[i].F, "base", 0});

    auto already_evaluated = [&](double lambda) {
        for (const auto& e : evals)
            if (std::abs(e.lambda - lambda) <= 1e-12) return true;
        return false;
    };
    auto top_two = [&]() {
        int i1 = -1, i2 = -1;
        for (size_t i = 0; i < evals.size(); ++i) {
            const auto& e = evals[i];
            auto better = [&](int other) {
                if (other < 0) return true;
                if (e.F != evals[other].F) return e.F > evals[other].F;
                return e.lambda < evals[other].lambda;  // ties toward smaller lambda
            };
            if (better(i1)) {
                i2 = i1;
                i1 = static_cast<int>(i);
            } else if (better(i2)) {
                i2 = static_cast<int>(i);
            }
        }
        return std::pair<int, int>(i1, i2);
    };

    double f_scale = 1.0;
    double best_f = -kInf;
    for (const auto& e : evals) {
        f_scale = std::max(f_scale, std::abs(e.cost) * std::abs(e.emissions));
        best_f = std::max(best_f, e.F);
    }
    if (best_f <= 1e-9 * f_scale) {
        // every vertex product vanishes: single-point or flat frontier
        auto [i1, i2] = top_two();
        out.degenerate = true;
        out.converged = true;
        out.lambda_star = evals[i1].lambda;
        out.F_star = evals[i1].F;
        if (i2 >= 0) out.trace.top_two.push_back({evals[i1].lambda, evals[i2].lambda});
        return out;
    }

    while (true) {
        auto [i1, i2] = top_two();
        double l1 = evals[i1].lambda, l2 = evals[i2].lambda;
        double f1 = evals[i1].F, f2 = evals[i2].F;
        out.trace.top_two.push_back({l1, l2});

        bool f_ok = std::abs(f1 - f2) <= cfg.eps1_rel * f1;
        bool r_ok = std::abs(weight_ratio(l1) - weight_ratio(l2)) <= cfg.eps2;
        bool converged = cfg.mode == ConvergenceMode::both ? (f_ok && r_ok) : (f_ok || r_ok);
        if (converged) {
            out.converged = true;
            if (f_ok) out.converged_by.push_back("F_gap");
            if (r_ok) out.converged_by.push_back("weight_ratio");
            out.lambda_star = l1;
            out.F_star = f1;
            return out;
        }
        if (out.iterations >= cfg.max_iters) {
            out.lambda_star = l1;
            out.F_star = f1;
            return out;  // non-converged, best so far
        }

        double mid = round_sig(0.5 * (l1 + l2));
        int guard = 0;
        while (already_evaluated(mid) && guard++ < 60) mid = round_sig(0.5 * (mid + l1));
        if (already_evaluated(mid)) {
            out.lambda_star = l1;
            out.F_star = f1;
            return out;  // no fresh candidate left between the leaders
        }
        ++out.iterations;
        EvalPoint p = eval(mid);
        evals.push_back({mid, p.cost, p.emissions, p.F, "iteration", out.iterations});
    }
}

std::pair<NashResult, IterationTrace> dynamic_weight_search(const CaseData& c,
                                                            const NashConfig& cfg) {
    DisagreementInfo info = compute_disagreement(c, cfg.workers);
    const NashProblem& problem = info.problem;
    Norms norms{problem.cost_norm, problem.emission_norm};

    std::vector<std::pair<double, HorizonDispatch>> cache;
    std::mutex cache_mutex;
    Evaluator eval = [&](double lambda) {
        HorizonDispatch hd = solve_horizon(c, lambda, norms);
        EvalPoint p{hd.total_cost, hd.total_emissions,
                    nash_product(hd.total_cost, hd.total_emissions, problem)};
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.push_back({lambda, std::move(hd)});
        return p;
    };

    SearchOutcome outcome = dynamic_weight_search_core(eval, cfg);

    IterationTrace trace;
    trace.evaluations.push_back({0.0, info.endpoint0.cost, info.endpoint0.emissions,
                                 nash_product(info.endpoint0.cost, info.endpoint0.emissions,
                                              problem),
                                 "endpoint", 0});
    trace.evaluations.push_back({1.0, info.endpoint1.cost, info.endpoint1.emissions,
                                 nash_product(info.endpoint1.cost, info.endpoint1.emissions,
                                              problem),
                                 "endpoint", 0});
    trace.evaluations.insert(trace.evaluations.end(), outcome.trace.evaluations.begin(),
                             outcome.trace.evaluations.end());
    trace.top_two = outcome.trace.top_two;
    trace.converged_by = outcome.converged_by;

    NashResult result;
    result.lambda_star = outcome.lambda_star;
    result.F_star = outcome.F_star;
    result.converged = outcome.converged;
    result.degenerate = outcome.degenerate;
    result.iterations = outcome.iterations;
    result.converged_by = outcome.converged_by;
    result.problem = problem;
    auto [ratio, price] = effective_carbon_price(result.lambda_star, problem);
    result.carbon_ratio = ratio;
    result.carbon_price = price;

    for (auto& entry : cache)
        if (entry.first == result.lambda_star) result.dispatch = std::move(entry.second);
    if (result.dispatch.periods.empty())
        result.dispatch = solve_horizon(c, result.lambda_star, norms, cfg.workers);

    if (cfg.segment_refinement) {
        // distinct evaluated frontier points, endpoints included, by cost
        std::vector<FrontierPoint> pts;
        for (const auto& e : trace.evaluations) {
            bool dup = false;
            for (const auto& p : pts) {
                if (std::abs(p.cost - e.cost) <= 1e-9 * (1.0 + std::abs(p.cost)) &&
                    std::abs(p.emissions - e.emissions) <=
                        1e-9 * (1.0 + std::abs(p.emissions))) {
                    dup = true;
                    break;
                }
            }
            if (!dup) pts.push_back({e.lambda, e.cost, e.emissions, 0.0});
        }
        std::sort(pts.begin(), pts.end(),
                  [](const FrontierPoint& a, const FrontierPoint& b) { return a.cost < b.cost; });

        std::optional<RefinedPoint> best;
        auto consider = [&](const FrontierPoint& a, const FrontierPoint& b) {
            RefinedPoint r = segment_refine(a, b, problem);
            if (!best || r.F > best->F) best = r;
        };
        if (result.degenerate) {
            for (size_t i = 0; i + 1 < pts.size(); ++i) consider(pts[i], pts[i + 1]);
        } else {
            // refine only between lambda*'s vertex and its frontier neighbors
            double star_cost = result.dispatch.total_cost;
            size_t star = 0;
            for (size_t i = 0; i < pts.size(); ++i)
                if (std::abs(pts[i].cost - star_cost) < std::abs(pts[star].cost - star_cost))
                    star = i;
            if (star > 0) consider(pts[star], pts[star - 1]);
            if (star + 1 < pts.size()) consider(pts[star], pts[star + 1]);
        }
        if (best && (result.degenerate || best->F > result.F_star)) result.refined = best;
    }

    return {result, trace};
}

void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << "phase,iter,lambda,cost,emissions,F\n";
    for (const auto& e : trace.evaluations)
        out << e.phase << "," << e.iter << "," << format_value(e.lambda) << ","
            << format_value(e.cost) << "," << format_value(e.emissions) << ","
            << format_value(e.F) << "\n";
}

}  // namespace lced
