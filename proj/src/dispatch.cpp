#include "lced/dispatch.hpp"

#include <algorithm>
#include <cmath>

#include "lced/errors.hpp"
#include "lced/util.hpp"

namespace lced {

double DispatchViolations::max_violation() const {
    return std::max({balance, ac_flow, dc_flow, unit_bounds});
}

std::pair<LPInstance, VarMap> build_period_lp(const CaseData& c, int t, double lambda,
                                              const Norms& norms) {
    if (t < 0 || t >= c.horizon)
        throw std::invalid_argument("period " + std::to_string(t) + " outside horizon");
    if (!(norms.cost > 0.0) || !(norms.emissions > 0.0))
        throw std::invalid_argument("norms must be strictly positive");

    const int n_units = static_cast<int>(c.units.size());
    const int n_nodes = static_cast<int>(c.nodes.size());
    const int n_dc = static_cast<int>(c.dc_lines.size());
    const int n_ac = static_cast<int>(c.ac_lines.size());

    VarMap vm;
    vm.unit_col.resize(n_units);
    vm.angle_col.resize(n_nodes);
    vm.dc_col.resize(n_dc);
    int col = 0;
    for (int u = 0; u < n_units; ++u) vm.unit_col[u] = col++;
    for (int nd = 0; nd < n_nodes; ++nd) vm.angle_col[nd] = col++;
    for (int l = 0; l < n_dc; ++l) vm.dc_col[l] = col++;
    vm.n_vars = col;

    LPInstance lp = LPInstance::with_vars(vm.n_vars);
    lp.var_names.reserve(vm.n_vars);
    for (const auto& u : c.units) lp.var_names.push_back("p_g" + std::to_string(u.id));
    for (const auto& nd : c.nodes) lp.var_names.push_back("theta" + std::to_string(nd.id));
    for (const auto& l : c.dc_lines) lp.var_names.push_back("p_dc" + std::to_string(l.id));

    // objective: scalarized unit coefficients, all network variables free of cost
    for (int u = 0; u < n_units; ++u) {
        const Unit& unit = c.units[u];
        lp.c[vm.unit_col[u]] = lambda * unit.cost_coeff / norms.cost +
                               (1.0 - lambda) * unit.emission_coeff / norms.emissions;
    }

    // unit bounds, availability applied to the ceiling
    for (int u = 0; u < n_units; ++u) {
        auto [lo, hi] = effective_unit_bounds(c, c.units[u].id, t);
        lp.lo[vm.unit_col[u]] = lo;
        lp.hi[vm.unit_col[u]] = hi;
    }
    // DC flows in [0, cap], direction fixed
    for (int l = 0; l < n_dc; ++l) {
        lp.lo[vm.dc_col[l]] = 0.0;
        lp.hi[vm.dc_col[l]] = c.dc_lines[l].capacity;
    }
    // reference angle per AC island pinned to zero
    std::vector<int> island = ac_islands(c);
    int n_islands = island.empty() ? 0 : *std::max_element(island.begin(), island.end()) + 1;
    vm.ref_nodes.assign(n_islands, -1);
    for (int nd = 0; nd < n_nodes; ++nd)
        if (vm.ref_nodes[island[nd]] < 0) vm.ref_nodes[island[nd]] = nd;
    for (int ref : vm.ref_nodes) {
        lp.lo[vm.angle_col[ref]] = 0.0;
        lp.hi[vm.angle_col[ref]] = 0.0;
    }

    // nodal balance: sum of unit output - AC export - DC export = load.
    // AC export is s_base * (Laplacian(theta))_n in MW; the s_base factor is
    // folded into the angle coefficients so angles stay in radians.
    lp.H.setZero(n_nodes, vm.n_vars);
    lp.h.resize(n_nodes);
    for (int u = 0; u < n_units; ++u) lp.H(c.units[u].node_id, vm.unit_col[u]) = 1.0;
    for (const auto& l : c.ac_lines) {
        double w = l.susceptance * c.s_base;
        lp.H(l.from_node, vm.angle_col[l.from_node]) -= w;
        lp.H(l.from_node, vm.angle_col[l.to_node]) += w;
        lp.H(l.to_node, vm.angle_col[l.to_node]) -= w;
        lp.H(l.to_node, vm.angle_col[l.from_node]) += w;
    }
    for (int l = 0; l < n_dc; ++l) {
        lp.H(c.dc_lines[l].from_node, vm.dc_col[l]) -= 1.0;
        lp.H(c.dc_lines[l].to_node, vm.dc_col[l]) += 1.0;
    }
    for (int nd = 0; nd < n_nodes; ++nd) lp.h[nd] = c.load(nd, t);

    // AC line limits on the angle difference, both directions
    lp.G.setZero(2 * n_ac, vm.n_vars);
    lp.g.resize(2 * n_ac);
    for (int l = 0; l < n_ac; ++l) {
        const AcLine& line = c.ac_lines[l];
        double w = line.susceptance * c.s_base;
        lp.G(2 * l, vm.angle_col[line.from_node]) = w;
        lp.G(2 * l, vm.angle_col[line.to_node]) = -w;
        lp.g[2 * l] = line.capacity;
        lp.G(2 * l + 1, vm.angle_col[line.from_node]) = -w;
        lp.G(2 * l + 1, vm.angle_col[line.to_node]) = w;
        lp.g[2 * l + 1] = line.capacity;
    }

    return {std::move(lp), std::move(vm)};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> objective_vectors(const CaseData& c,
                                                              const VarMap& vm) {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(vm.n_vars);
    Eigen::VectorXd emis = Eigen::VectorXd::Zero(vm.n_vars);
    for (size_t u = 0; u < c.units.size(); ++u) {
        cost[vm.unit_col[u]] = c.units[u].cost_coeff;
        emis[vm.unit_col[u]] = c.units[u].emission_coeff;
    }
    return {std::move(cost), std::move(emis)};
}

PeriodDispatch extract_solution(const LPSolution& sol, const VarMap& vm, const CaseData& c,
                                int t) {
    if (sol.status != SolveStatus::optimal)
        throw InfeasibleError("period " + std::to_string(t) + " is " + to_string(sol.status));

    PeriodDispatch pd;
    pd.t = t;
    pd.unit_output.resize(c.units.size());
    pd.angles.resize(c.nodes.size());
    pd.dc_flows.resize(c.dc_lines.size());
    pd.ac_flows.resize(c.ac_lines.size());
    for (size_t u = 0; u < c.units.size(); ++u) pd.unit_output[u] = sol.x[vm.unit_col[u]];
    for (size_t nd = 0; nd < c.nodes.size(); ++nd) pd.angles[nd] = sol.x[vm.angle_col[nd]];
    for (size_t l = 0; l < c.dc_lines.size(); ++l) pd.dc_flows[l] = sol.x[vm.dc_col[l]];
    for (size_t l = 0; l < c.ac_lines.size(); ++l) {
        const AcLine& line = c.ac_lines[l];
        pd.ac_flows[l] =
            line.susceptance * (pd.angles[line.from_node] - pd.angles[line.to_node]) * c.s_base;
    }
    for (size_t u = 0; u < c.units.size(); ++u) {
        pd.cost += c.units[u].cost_coeff * pd.unit_output[u];
        pd.emissions += c.units[u].emission_coeff * pd.unit_output[u];
    }
    return pd;
}

DispatchViolations check_period_dispatch(const CaseData& c, const PeriodDispatch& pd) {
    DispatchViolations v;
    const int n_nodes = static_cast<int>(c.nodes.size());
    std::vector<double> injection(n_nodes, 0.0);
    for (size_t u = 0; u < c.units.size(); ++u)
        injection[c.units[u].node_id] += pd.unit_output[u];
    for (size_t l = 0; l < c.ac_lines.size(); ++l) {
        injection[c.ac_lines[l].from_node] -= pd.ac_flows[l];
        injection[c.ac_lines[l].to_node] += pd.ac_flows[l];
        v.ac_flow = std::max(v.ac_flow, std::abs(pd.ac_flows[l]) - c.ac_lines[l].capacity);
    }
    for (size_t l = 0; l < c.dc_lines.size(); ++l) {
        injection[c.dc_lines[l].from_node] -= pd.dc_flows[l];
        injection[c.dc_lines[l].to_node] += pd.dc_flows[l];
        v.dc_flow = std::max({v.dc_flow, -pd.dc_flows[l], pd.dc_flows[l] - c.dc_lines[l].capacity});
    }
    for (int nd = 0; nd < n_nodes; ++nd)
        v.balance = std::max(v.balance, std::abs(injection[nd] - c.load(nd, pd.t)));
    for (size_t u = 0; u < c.units.size(); ++u) {
        auto [lo, hi] = effective_unit_bounds(c, c.units[u].id, pd.t);
        v.unit_bounds =
            std::max({v.unit_bounds, lo - pd.unit_output[u], pd.unit_output[u] - hi});
    }
    v.ac_flow = std::max(v.ac_flow, 0.0);
    v.dc_flow = std::max(v.dc_flow, 0.0);
    v.unit_bounds = std::max(v.unit_bounds, 0.0);
    return v;
}

HorizonDispatch solve_horizon(const CaseData& c, double lambda, const Norms& norms,
                              int workers) {
    HorizonDispatch hd;
    hd.periods.resize(c.horizon);
    std::vector<int> infeasible(c.horizon, 0);
    parallel_for(c.horizon, workers, [&](int t) {
        auto [lp, vm] = build_period_lp(c, t, lambda, norms);
        LPSolution sol = simplex_solve(lp);
        if (sol.status != SolveStatus::optimal) {
            infeasible[t] = 1;
            return;
        }
        hd.periods[t] = extract_solution(sol, vm, c, t);
    });
    std::vector<int> bad;
    for (int t = 0; t < c.horizon; ++t)
        if (infeasible[t]) bad.push_back(t);
    if (!bad.empty()) throw InfeasibleError(bad);
    for (const auto& pd : hd.periods) {
        hd.total_cost += pd.cost;
        hd.total_emissions += pd.emissions;
    }
    return hd;
}

}  // namespace lced
