#ifndef LCED_NASH_HPP
#define LCED_NASH_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lced/case.hpp"
#include "lced/dispatch.hpp"
#include "lced/frontier.hpp"

namespace lced {

enum class ConvergenceMode { both, either };

struct NashConfig {
    std::vector<double> base_grid;  // default 0.05, 0.15, ..., 0.95
    double eps1_rel = 1e-4;         // relative gap between the two best F values
    double eps2 = 0.02;             // absolute gap between the (1-l)/l weight ratios
    int max_iters = 50;
    ConvergenceMode mode = ConvergenceMode::both;
    bool segment_refinement = true;
    int workers = 1;

    NashConfig();
};

/// Disagreement values and objective normalizers: d1 is the cost at the
/// emission-optimal frontier endpoint, d2 the emissions at the cost-optimal
/// endpoint. Both endpoints come from lexicographic solves so they are exact
/// Pareto points.
struct NashProblem {
    double d1 = 0.0;             // worst (largest) Pareto cost
    double d2 = 0.0;             // worst (largest) Pareto emissions
    double cost_norm = 1.0;      // = d1, floored at a tiny positive value
    double emission_norm = 1.0;  // = d2, floored likewise
};

struct DisagreementInfo {
    NashProblem problem;
    FrontierPoint endpoint0;  // lambda = 0 lexicographic point
    FrontierPoint endpoint1;  // lambda = 1 lexicographic point
};

struct Evaluation {
    double lambda = 0.0;
    double cost = 0.0;
    double emissions = 0.0;
    double F = 0.0;
    std::string phase;  // "endpoint", "base" or "iteration"
    int iter = 0;       // iteration number, 0 for endpoint/base
};

struct IterationTrace {
    std::vector<Evaluation> evaluations;
    std::vector<std::pair<double, double>> top_two;  // (lambda1, lambda2) per check
    std::vector<std::string> converged_by;           // which criteria fired at the end
};

struct RefinedPoint {
    double cost = 0.0;
    double emissions = 0.0;
    double s = 0.0;  // mixing weight toward the second vertex
    double F = 0.0;
};

struct NashResult {
    double lambda_star = 0.0;
    double F_star = 0.0;
    bool converged = false;
    bool degenerate = false;  // every vertex Nash product is zero
    int iterations = 0;
    std::vector<std::string> converged_by;
    NashProblem problem;
    double carbon_ratio = 0.0;  // (1 - lambda*) / lambda*
    double carbon_price = 0.0;  // currency per ton under the documented convention
    std::optional<RefinedPoint> refined;
    HorizonDispatch dispatch;   // dispatch at lambda*
};

NashProblem disagreement_points(const CaseData& c, int workers = 1);
DisagreementInfo compute_disagreement(const CaseData& c, int workers = 1);

/// Bargaining objective (d1 - cost) * (d2 - emissions).
double nash_product(double cost, double emissions, const NashProblem& problem);

/// Best convex combination of two adjacent frontier vertices under the Nash
/// product; closed form of a concave quadratic in the mixing weight.
RefinedPoint segment_refine(const FrontierPoint& a, const FrontierPoint& b,
                            const NashProblem& problem);

/// normalized ratio (1-lambda)/lambda and its conversion to currency per ton
/// via cost_norm / emission_norm. Throws std::invalid_argument at lambda = 0.
std::pair<double, double> effective_carbon_price(double lambda, const NashProblem& problem);

/// One frontier evaluation for the weight search: cost/emissions at a weight
/// plus the bargaining objective. Custom evaluators may supply F directly
/// (e.g. replayed traces); the case-driven evaluator computes it with
/// nash_product.
struct EvalPoint {
    double cost = 0.0;
    double emissions = 0.0;
    double F = 0.0;
};
using Evaluator = std::function<EvalPoint(double lambda)>;

struct SearchOutcome {
    double lambda_star = 0.0;
    double F_star = 0.0;
    bool converged = false;
    bool degenerate = false;
    int iterations = 0;
    std::vector<std::string> converged_by;
    IterationTrace trace;
};

/// The dynamic-weight bisection over an abstract evaluator: score the base
/// grid, then repeatedly evaluate the midpoint of the two best weights until
/// the configured criteria hold. Endpoint evaluations are recorded by the
/// caller; this runs the interior search only.
SearchOutcome dynamic_weight_search_core(const Evaluator& eval, const NashConfig& cfg);

/// Full pipeline on a case: lexicographic endpoints, normalization, base
/// grid, bisection, optional segment refinement, dispatch at lambda*.
std::pair<NashResult, IterationTrace> dynamic_weight_search(const CaseData& c,
                                                            const NashConfig& cfg = {});

void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path);

}  // namespace lced

#endif
