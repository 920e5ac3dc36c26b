#ifndef LCED_FRONTIER_HPP
#define LCED_FRONTIER_HPP

#include <filesystem>
#include <utility>
#include <vector>

#include "lced/case.hpp"
#include "lced/dispatch.hpp"
#include "lced/parametric.hpp"

namespace lced {

struct FrontierPoint {
    double lambda = 0.0;
    double cost = 0.0;       // raw currency
    double emissions = 0.0;  // raw tons
    double scalarized = 0.0;
};

/// One weight interval of the exact frontier: the vertex dispatch is
/// constant on it and the horizon value function is alpha + beta*lambda in
/// normalized units.
struct FrontierSegment {
    double lambda_lo = 0.0;
    double lambda_hi = 1.0;
    double cost = 0.0;
    double emissions = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

struct PiecewiseFrontier {
    std::vector<double> breakpoints;  // ascending, first 0, last 1
    std::vector<FrontierSegment> segments;

    const FrontierSegment& segment_at(double lambda) const;
};

/// Weighted-sum scan: one full-horizon solve per weight, sorted by lambda.
std::vector<FrontierPoint> scan_frontier(const CaseData& c, std::vector<double> lambdas,
                                         const Norms& norms, int workers = 1);

/// Exact piecewise frontier from per-period critical-region sweeps; horizon
/// breakpoints are the union of the per-period region boundaries.
PiecewiseFrontier exact_frontier(const CaseData& c, const Norms& norms);

/// Ordered pairs (i, j) where point i is dominated by point j beyond the
/// relative tolerance; empty result certifies mutual non-domination.
std::vector<std::pair<int, int>> check_dominance(const std::vector<FrontierPoint>& points,
                                                 double tol_rel = 1e-6);

void write_frontier_csv(const std::vector<FrontierPoint>& points,
                        const std::filesystem::path& path);
void write_breakpoints_csv(const PiecewiseFrontier& frontier,
                           const std::filesystem::path& path);

/// Uniform weight grid with `count` points spanning [0, 1].
std::vector<double> lambda_grid(int count);

}  // namespace lced

#endif
