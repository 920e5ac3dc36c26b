#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "lced/case.hpp"
#include "lced/dispatch.hpp"
#include "lced/errors.hpp"
#include "lced/frontier.hpp"
#include "lced/io.hpp"
#include "lced/lp.hpp"
#include "lced/nash.hpp"
#include "lced/parametric.hpp"

namespace py = pybind11;
using namespace lced;

namespace {

std::vector<CriticalRegion> period_regions(const CaseData& c, int t, const Norms& norms) {
    auto [lp, vm] = build_period_lp(c, t, 0.5, norms);
    auto [cost_vec, emis_vec] = objective_vectors(c, vm);
    return enumerate_regions(
        to_parametric_form(lp, cost_vec / norms.cost, emis_vec / norms.emissions));
}

}  // namespace

PYBIND11_MODULE(_lced, m) {
    m.doc() = "two-objective (cost, emissions) dispatch over a DC network: weighted-sum "
              "frontier scans, exact parametric frontiers and the bargaining-equilibrium "
              "weight search";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::enum_<UnitKind>(m, "UnitKind")
        .value("thermal", UnitKind::thermal)
        .value("gas", UnitKind::gas)
        .value("hydro", UnitKind::hydro)
        .value("nuclear", UnitKind::nuclear)
        .value("wind", UnitKind::wind)
        .value("pv", UnitKind::pv)
        .value("other", UnitKind::other);

    py::class_<Node>(m, "Node")
        .def(py::init<>())
        .def_readwrite("id", &Node::id)
        .def_readwrite("name", &Node::name);

    py::class_<Unit>(m, "Unit")
        .def(py::init<>())
        .def_readwrite("id", &Unit::id)
        .def_readwrite("node_id", &Unit::node_id)
        .def_readwrite("kind", &Unit::kind)
        .def_readwrite("cost_coeff", &Unit::cost_coeff)
        .def_readwrite("emission_coeff", &Unit::emission_coeff)
        .def_readwrite("p_min", &Unit::p_min)
        .def_readwrite("p_max", &Unit::p_max);

    py::class_<AcLine>(m, "AcLine")
        .def(py::init<>())
        .def_readwrite("id", &AcLine::id)
        .def_readwrite("from_node", &AcLine::from_node)
        .def_readwrite("to_node", &AcLine::to_node)
        .def_readwrite("susceptance", &AcLine::susceptance)
        .def_readwrite("capacity", &AcLine::capacity);

    py::class_<DcLine>(m, "DcLine")
        .def(py::init<>())
        .def_readwrite("id", &DcLine::id)
        .def_readwrite("from_node", &DcLine::from_node)
        .def_readwrite("to_node", &DcLine::to_node)
        .def_readwrite("capacity", &DcLine::capacity);

    py::class_<CaseData>(m, "CaseData")
        .def(py::init<>())
        .def_readwrite("nodes", &CaseData::nodes)
        .def_readwrite("units", &CaseData::units)
        .def_readwrite("ac_lines", &CaseData::ac_lines)
        .def_readwrite("dc_lines", &CaseData::dc_lines)
        .def_readwrite("load_map", &CaseData::load_map)
        .def_readwrite("avail_map", &CaseData::avail_map)
        .def_readwrite("horizon", &CaseData::horizon)
        .def_readwrite("s_base", &CaseData::s_base)
        .def_readonly("warnings", &CaseData::warnings)
        .def("load", &CaseData::load, py::arg("node_id"), py::arg("t"))
        .def("availability", &CaseData::availability, py::arg("unit_id"), py::arg("t"))
        .def("total_load", &CaseData::total_load, py::arg("t"))
        .def("__eq__", [](const CaseData& a, const CaseData& b) { return a == b; });

    m.def("load_case", &load_case, py::arg("case_dir"));
    m.def("save_case", &save_case, py::arg("case"), py::arg("case_dir"));
    m.def("builtin_case", &builtin_case, py::arg("name"));
    m.def("effective_unit_bounds", &effective_unit_bounds, py::arg("case"), py::arg("unit_id"),
          py::arg("t"));
    m.def("ac_islands", &ac_islands, py::arg("case"));

    py::class_<LPInstance>(m, "LPInstance")
        .def(py::init(&LPInstance::with_vars), py::arg("num_vars"))
        .def_readwrite("c", &LPInstance::c)
        .def_readwrite("G", &LPInstance::G)
        .def_readwrite("g", &LPInstance::g)
        .def_readwrite("H", &LPInstance::H)
        .def_readwrite("h", &LPInstance::h)
        .def_readwrite("lo", &LPInstance::lo)
        .def_readwrite("hi", &LPInstance::hi)
        .def("add_ineq", &LPInstance::add_ineq, py::arg("row"), py::arg("rhs"))
        .def("dump", [](const LPInstance& lp) {
            std::ostringstream os;
            dump_lp(lp, os);
            return os.str();
        });

    py::enum_<SolveStatus>(m, "SolveStatus")
        .value("optimal", SolveStatus::optimal)
        .value("infeasible", SolveStatus::infeasible)
        .value("unbounded", SolveStatus::unbounded);

    py::class_<LPSolution>(m, "LPSolution")
        .def_readonly("status", &LPSolution::status)
        .def_readonly("x", &LPSolution::x)
        .def_readonly("objective_value", &LPSolution::objective_value)
        .def_readonly("basis", &LPSolution::basis)
        .def_readonly("duals", &LPSolution::duals)
        .def_readonly("reduced_costs", &LPSolution::reduced_costs)
        .def_readonly("iterations", &LPSolution::iterations);

    m.def(
        "simplex_solve",
        [](const LPInstance& lp, const std::optional<std::vector<int>>& warm) {
            return simplex_solve(lp, warm);
        },
        py::arg("lp"), py::arg("warm_basis") = std::nullopt);

    py::class_<Norms>(m, "Norms")
        .def(py::init<>())
        .def(py::init([](double cost, double emissions) {
                 return Norms{cost, emissions};
             }),
             py::arg("cost"), py::arg("emissions"))
        .def_readwrite("cost", &Norms::cost)
        .def_readwrite("emissions", &Norms::emissions);

    py::class_<PeriodDispatch>(m, "PeriodDispatch")
        .def_readonly("t", &PeriodDispatch::t)
        .def_readonly("unit_output", &PeriodDispatch::unit_output)
        .def_readonly("angles", &PeriodDispatch::angles)
        .def_readonly("dc_flows", &PeriodDispatch::dc_flows)
        .def_readonly("ac_flows", &PeriodDispatch::ac_flows)
        .def_readonly("cost", &PeriodDispatch::cost)
        .def_readonly("emissions", &PeriodDispatch::emissions);

    py::class_<HorizonDispatch>(m, "HorizonDispatch")
        .def_readonly("periods", &HorizonDispatch::periods)
        .def_readonly("total_cost", &HorizonDispatch::total_cost)
        .def_readonly("total_emissions", &HorizonDispatch::total_emissions);

    py::class_<DispatchViolations>(m, "DispatchViolations")
        .def_readonly("balance", &DispatchViolations::balance)
        .def_readonly("ac_flow", &DispatchViolations::ac_flow)
        .def_readonly("dc_flow", &DispatchViolations::dc_flow)
        .def_readonly("unit_bounds", &DispatchViolations::unit_bounds)
        .def("max_violation", &DispatchViolations::max_violation);

    m.def("solve_horizon", &solve_horizon, py::arg("case"), py::arg("lambda_"), py::arg("norms"),
          py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("check_period_dispatch", &check_period_dispatch, py::arg("case"), py::arg("dispatch"));

    py::class_<FrontierPoint>(m, "FrontierPoint")
        .def(py::init([](double lambda, double cost, double emissions) {
                 return FrontierPoint{lambda, cost, emissions, 0.0};
             }),
             py::arg("lambda_"), py::arg("cost"), py::arg("emissions"))
        .def_readonly("lambda_", &FrontierPoint::lambda)
        .def_readonly("cost", &FrontierPoint::cost)
        .def_readonly("emissions", &FrontierPoint::emissions)
        .def_readonly("scalarized", &FrontierPoint::scalarized);

    py::class_<FrontierSegment>(m, "FrontierSegment")
        .def_readonly("lambda_lo", &FrontierSegment::lambda_lo)
        .def_readonly("lambda_hi", &FrontierSegment::lambda_hi)
        .def_readonly("cost", &FrontierSegment::cost)
        .def_readonly("emissions", &FrontierSegment::emissions)
        .def_readonly("alpha", &FrontierSegment::alpha)
        .def_readonly("beta", &FrontierSegment::beta);

    py::class_<PiecewiseFrontier>(m, "PiecewiseFrontier")
        .def_readonly("breakpoints", &PiecewiseFrontier::breakpoints)
        .def_readonly("segments", &PiecewiseFrontier::segments)
        .def("segment_at", &PiecewiseFrontier::segment_at, py::arg("lambda_"),
             py::return_value_policy::copy);

    m.def("scan_frontier", &scan_frontier, py::arg("case"), py::arg("lambdas"), py::arg("norms"),
          py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("exact_frontier", &exact_frontier, py::arg("case"), py::arg("norms"),
          py::call_guard<py::gil_scoped_release>());
    m.def("check_dominance", &check_dominance, py::arg("points"), py::arg("tol_rel") = 1e-6);
    m.def("lambda_grid", &lambda_grid, py::arg("count"));

    py::class_<CriticalRegion>(m, "CriticalRegion")
        .def_readonly("theta_lo", &CriticalRegion::theta_lo)
        .def_readonly("theta_hi", &CriticalRegion::theta_hi)
        .def_readonly("active_set", &CriticalRegion::active_set)
        .def_readonly("x", &CriticalRegion::x)
        .def_readonly("alpha", &CriticalRegion::alpha)
        .def_readonly("beta", &CriticalRegion::beta)
        .def("value", &CriticalRegion::value, py::arg("theta"));

    m.def("period_regions", &period_regions, py::arg("case"), py::arg("t"), py::arg("norms"),
          py::call_guard<py::gil_scoped_release>(),
          "critical regions of one period's weight sweep");

    py::enum_<ConvergenceMode>(m, "ConvergenceMode")
        .value("both", ConvergenceMode::both)
        .value("either", ConvergenceMode::either);

    py::class_<NashConfig>(m, "NashConfig")
        .def(py::init<>())
        .def_readwrite("base_grid", &NashConfig::base_grid)
        .def_readwrite("eps1_rel", &NashConfig::eps1_rel)
        .def_readwrite("eps2", &NashConfig::eps2)
        .def_readwrite("max_iters", &NashConfig::max_iters)
        .def_readwrite("mode", &NashConfig::mode)
        .def_readwrite("segment_refinement", &NashConfig::segment_refinement)
        .def_readwrite("workers", &NashConfig::workers);

    py::class_<NashProblem>(m, "NashProblem")
        .def(py::init([](double d1, double d2) {
                 return NashProblem{d1, d2, d1 > 0 ? d1 : 1.0, d2 > 0 ? d2 : 1.0};
             }),
             py::arg("d1"), py::arg("d2"))
        .def_readonly("d1", &NashProblem::d1)
        .def_readonly("d2", &NashProblem::d2)
        .def_readonly("cost_norm", &NashProblem::cost_norm)
        .def_readonly("emission_norm", &NashProblem::emission_norm);

    py::class_<Evaluation>(m, "Evaluation")
        .def_readonly("lambda_", &Evaluation::lambda)
        .def_readonly("cost", &Evaluation::cost)
        .def_readonly("emissions", &Evaluation::emissions)
        .def_readonly("F", &Evaluation::F)
        .def_readonly("phase", &Evaluation::phase)
        .def_readonly("iter", &Evaluation::iter);

    py::class_<IterationTrace>(m, "IterationTrace")
        .def_readonly("evaluations", &IterationTrace::evaluations)
        .def_readonly("top_two", &IterationTrace::top_two)
        .def_readonly("converged_by", &IterationTrace::converged_by);

    py::class_<RefinedPoint>(m, "RefinedPoint")
        .def_readonly("cost", &RefinedPoint::cost)
        .def_readonly("emissions", &RefinedPoint::emissions)
        .def_readonly("s", &RefinedPoint::s)
        .def_readonly("F", &RefinedPoint::F);

    py::class_<NashResult>(m, "NashResult")
        .def_readonly("lambda_star", &NashResult::lambda_star)
        .def_readonly("F_star", &NashResult::F_star)
        .def_readonly("converged", &NashResult::converged)
        .def_readonly("degenerate", &NashResult::degenerate)
        .def_readonly("iterations", &NashResult::iterations)
        .def_readonly("converged_by", &NashResult::converged_by)
        .def_readonly("problem", &NashResult::problem)
        .def_readonly("carbon_ratio", &NashResult::carbon_ratio)
        .def_readonly("carbon_price", &NashResult::carbon_price)
        .def_readonly("refined", &NashResult::refined)
        .def_readonly("dispatch", &NashResult::dispatch);

    m.def("disagreement_points", &disagreement_points, py::arg("case"), py::arg("workers") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("nash_product", &nash_product, py::arg("cost"), py::arg("emissions"),
          py::arg("problem"));
    m.def("segment_refine", &segment_refine, py::arg("a"), py::arg("b"), py::arg("problem"));
    m.def("effective_carbon_price", &effective_carbon_price, py::arg("lambda_"),
          py::arg("problem"));
    m.def(
        "dynamic_weight_search",
        [](const CaseData& c, const NashConfig& cfg) { return dynamic_weight_search(c, cfg); },
        py::arg("case"), py::arg("config") = NashConfig{},
        py::call_guard<py::gil_scoped_release>());

    m.attr("__version__") = "0.1.0";
}
