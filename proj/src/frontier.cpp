#include "lced/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>

#include "lced/errors.hpp"
#include "lced/util.hpp"

namespace lced {

const FrontierSegment& PiecewiseFrontier::segment_at(double lambda) const {
    if (segments.empty()) throw std::logic_error("empty frontier");
    // a boundary lambda belongs to the segment on its right
    for (const auto& s : segments)
        if (lambda < s.lambda_hi) return s;
    return segments.back();
}

std::vector<double> lambda_grid(int count) {
    if (count < 2) return {0.0};
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i) grid[i] = round_sig(static_cast<double>(i) / (count - 1));
    return grid;
}

std::vector<FrontierPoint> scan_frontier(const CaseData& c, std::vector<double> lambdas,
                                         const Norms& norms, int workers) {
    for (double l : lambdas)
        if (l < 0.0 || l > 1.0) throw std::invalid_argument("lambda outside [0, 1]");
    std::sort(lambdas.begin(), lambdas.end());
    std::vector<FrontierPoint> points(lambdas.size());
    std::exception_ptr first_error;
    std::mutex error_mutex;
    parallel_for(static_cast<int>(lambdas.size()), workers, [&](int i) {
        try {
            HorizonDispatch hd = solve_horizon(c, lambdas[i], norms);
            points[i] = {lambdas[i], hd.total_cost, hd.total_emissions,
                         lambdas[i] * hd.total_cost / norms.cost +
                             (1.0 - lambdas[i]) * hd.total_emissions / norms.emissions};
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    });
    if (first_error) std::rethrow_exception(first_error);
    return points;
}

PiecewiseFrontier exact_frontier(const CaseData& c, const Norms& norms) {
    // per-period region sweeps over the normalized bi-objective form
    std::vector<std::vector<CriticalRegion>> period_regions(c.horizon);
    std::vector<std::vector<std::pair<double, double>>> period_pairs(c.horizon);  // raw cost/em
    for (int t = 0; t < c.horizon; ++t) {
        auto [lp, vm] = build_period_lp(c, t, 0.5, norms);
        auto [cost_vec, emis_vec] = objective_vectors(c, vm);
        ParametricForm form =
            to_parametric_form(lp, cost_vec / norms.cost, emis_vec / norms.emissions);
        period_regions[t] = enumerate_regions(form);
        for (const auto& r : period_regions[t]) {
            double raw_cost = cost_vec.dot(r.x);
            double raw_emis = emis_vec.dot(r.x);
            period_pairs[t].push_back({raw_cost, raw_emis});
        }
    }

    std::vector<double> cuts = {0.0, 1.0};
    for (const auto& regions : period_regions)
        for (const auto& r : regions) cuts.push_back(r.theta_hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
               cuts.end());
    if (cuts.back() < 1.0) cuts.push_back(1.0);

    PiecewiseFrontier out;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
        double mid = 0.5 * (cuts[k] + cuts[k + 1]);
        FrontierSegment seg;
        seg.lambda_lo = cuts[k];
        seg.lambda_hi = cuts[k + 1];
        for (int t = 0; t < c.horizon; ++t) {
            const auto& regions = period_regions[t];
            size_t idx = 0;
            while (idx + 1 < regions.size() && regions[idx].theta_hi < mid) ++idx;
            seg.cost += period_pairs[t][idx].first;
            seg.emissions += period_pairs[t][idx].second;
            seg.alpha += regions[idx].alpha;
            seg.beta += regions[idx].beta;
        }
        out.segments.push_back(seg);
    }

    // collapse cuts that did not change the horizon vertex
    std::vector<FrontierSegment> merged;
    for (const auto& seg : out.segments) {
        if (!merged.empty()) {
            FrontierSegment& last = merged.back();
            double cost_scale = 1.0 + std::abs(last.cost);
            double emis_scale = 1.0 + std::abs(last.emissions);
            if (std::abs(seg.cost - last.cost) <= 1e-9 * cost_scale &&
                std::abs(seg.emissions - last.emissions) <= 1e-9 * emis_scale) {
                last.lambda_hi = seg.lambda_hi;
                continue;
            }
        }
        merged.push_back(seg);
    }
    out.segments = std::move(merged);
    out.breakpoints = {0.0};
    for (const auto& seg : out.segments) out.breakpoints.push_back(seg.lambda_hi);
    return out;
}

std::vector<std::pair<int, int>> check_dominance(const std::vector<FrontierPoint>& points,
                                                 double tol_rel) {
    std::vector<std::pair<int, int>> dominated;
    const int n = static_cast<int>(points.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double ct = tol_rel * std::max(1.0, std::abs(points[i].cost));
            double et = tol_rel * std::max(1.0, std::abs(points[i].emissions));
            bool cost_le = points[j].cost <= points[i].cost + ct;
            bool emis_le = points[j].emissions <= points[i].emissions + et;
            bool cost_lt = points[j].cost < points[i].cost - ct;
            bool emis_lt = points[j].emissions < points[i].emissions - et;
            if (cost_le && emis_le && (cost_lt || emis_lt)) dominated.push_back({i, j});
        }
    }
    return dominated;
}

void write_frontier_csv(const std::vector<FrontierPoint>& points,
                        const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << "lambda,cost,emissions,scalarized\n";
    for (const auto& p : points)
        out << format_value(p.lambda) << "," << format_value(p.cost) << ","
            << format_value(p.emissions) << "," << format_value(p.scalarized) << "\n";
}

void write_breakpoints_csv(const PiecewiseFrontier& frontier,
                           const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << "lambda_lo,lambda_hi,cost,emissions\n";
    for (const auto& s : frontier.segments)
        out << format_value(s.lambda_lo) << "," << format_value(s.lambda_hi) << ","
            << format_value(s.cost) << "," << format_value(s.emissions) << "\n";
}

}  // namespace lced
