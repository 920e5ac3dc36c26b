#ifndef LCED_DISPATCH_HPP
#define LCED_DISPATCH_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "lced/case.hpp"
#include "lced/lp.hpp"

namespace lced {

/// Column layout of one period's LP: unit outputs first, then nodal angles,
/// then DC line flows. Reference angles (lowest node of each AC island) are
/// pinned to zero through fixed bounds.
struct VarMap {
    int n_vars = 0;
    std::vector<int> unit_col;   // by unit index
    std::vector<int> angle_col;  // by node id
    std::vector<int> dc_col;     // by dc line index
    std::vector<int> ref_nodes;  // one per AC island
};

/// Objective normalizers (worst-endpoint cost and emissions); (1, 1) keeps
/// the raw objectives.
struct Norms {
    double cost = 1.0;
    double emissions = 1.0;
};

struct PeriodDispatch {
    int t = 0;
    std::vector<double> unit_output;  // MW, by unit index
    std::vector<double> angles;      // radians, by node id
    std::vector<double> dc_flows;    // MW, by dc line index
    std::vector<double> ac_flows;    // MW, by ac line index, signed from->to
    double cost = 0.0;
    double emissions = 0.0;
};

struct HorizonDispatch {
    std::vector<PeriodDispatch> periods;
    double total_cost = 0.0;
    double total_emissions = 0.0;
};

/// Worst constraint violations of a period dispatch, in MW.
struct DispatchViolations {
    double balance = 0.0;
    double ac_flow = 0.0;
    double dc_flow = 0.0;
    double unit_bounds = 0.0;

    double max_violation() const;
};

/// One dispatch period as an LP: per-node balance equalities, AC flow limits
/// written directly on angle differences, DC flows and unit outputs bounded.
/// The unit objective coefficient is
///   lambda*cost/norms.cost + (1-lambda)*emission/norms.emissions.
std::pair<LPInstance, VarMap> build_period_lp(const CaseData& c, int t, double lambda,
                                              const Norms& norms);

/// Raw (unnormalized) cost and emission coefficient vectors over the LP
/// columns of `vm`.
std::pair<Eigen::VectorXd, Eigen::VectorXd> objective_vectors(const CaseData& c,
                                                              const VarMap& vm);

/// Decode an optimal LP solution: outputs, angles, flows (AC flows from
/// angle differences), raw cost and emissions. Throws InfeasibleError when
/// the solution status is not optimal.
PeriodDispatch extract_solution(const LPSolution& sol, const VarMap& vm, const CaseData& c,
                                int t);

DispatchViolations check_period_dispatch(const CaseData& c, const PeriodDispatch& pd);

/// Solve all periods independently and aggregate. Throws InfeasibleError
/// listing every infeasible period.
HorizonDispatch solve_horizon(const CaseData& c, double lambda, const Norms& norms,
                              int workers = 1);

}  // namespace lced

#endif
