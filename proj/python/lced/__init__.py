"""Two-objective (cost, emissions) dispatch over a DC network.

Thin wrapper around the native extension: weighted-sum frontier scans, exact
piecewise frontiers via critical-region sweeps, and the dynamic-weight search
for the bargaining equilibrium.
"""

from ._lced import (  # noqa: F401
    AcLine,
    CaseData,
    ConvergenceMode,
    CriticalRegion,
    DataError,
    DcLine,
    DispatchViolations,
    Evaluation,
    FrontierPoint,
    FrontierSegment,
    HorizonDispatch,
    InfeasibleError,
    IterationTrace,
    LPInstance,
    LPSolution,
    NashConfig,
    NashProblem,
    NashResult,
    Node,
    Norms,
    NumericalError,
    PeriodDispatch,
    PiecewiseFrontier,
    RefinedPoint,
    SolveStatus,
    Unit,
    UnitKind,
    __version__,
    ac_islands,
    builtin_case,
    check_dominance,
    check_period_dispatch,
    disagreement_points,
    dynamic_weight_search,
    effective_carbon_price,
    effective_unit_bounds,
    exact_frontier,
    lambda_grid,
    load_case,
    nash_product,
    period_regions,
    save_case,
    scan_frontier,
    segment_refine,
    simplex_solve,
    solve_horizon,
)
