"""
UVC Voltage Risk - Strategy Extraction
Solve a management problem, break ties deterministically and read back the dispatch
"""

import dataclasses
import logging
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import InfeasibleError, NumericError, UnboundedError
from ..solver.problem import LpProblem, MilpProblem, SolveResult, SolveStatus
from ..solver.simplex import SolverOptions, solve_lp
from ..solver.branch_bound import solve_milp
from .builders import ALPHA, q_abs_name, q_name, vc_name
from .spec import ManagementSpec, Strategy

logger = logging.getLogger(__name__)

COST_TOLERANCE = 1e-8
OBJECTIVE_SLACK = 1e-9


def extract_strategy(solution: SolveResult, spec: ManagementSpec, method: str = "uvcp") -> Strategy:
    """
    Read the dispatch out of an optimal solution.

    The reported cost is Σ c_j·|q_j| and must agree with the solver objective
    net of the curtailment penalty.

    Args:
        solution: Optimal SolveResult of a management problem
        spec: Inputs the problem was built from
        method: Label stored with the strategy

    Returns:
        Strategy in Mvar and pu²
    """
    if solution.status is SolveStatus.INFEASIBLE:
        raise InfeasibleError("management problem is infeasible")
    if solution.status is SolveStatus.UNBOUNDED:
        raise UnboundedError("management problem is unbounded")

    q = np.array([solution.value(q_name(p.id)) for p in spec.providers])
    q = np.clip(q, [p.q_min for p in spec.providers], [p.q_max for p in spec.providers])
    v_c = np.array([solution.value(vc_name(bus)) for bus in spec.bus_ids])
    alpha = solution.value(ALPHA) if ALPHA in solution.names else 0.0
    alpha = min(max(alpha, 0.0), 1.0)

    cost = float(spec.costs @ np.abs(q)) if q.size else 0.0
    expected = solution.objective - spec.big_m * alpha
    if abs(cost - expected) > COST_TOLERANCE * max(1.0, abs(cost)):
        raise NumericError(f"dispatch cost {cost:.12g} disagrees with solver objective "
                           f"{expected:.12g}")
    return Strategy(variant=spec.variant.value, tau=spec.tau, alpha=alpha, cost=cost,
                    provider_ids=tuple(p.id for p in spec.providers), q=q * spec.base_mva,
                    q_abs=np.abs(q) * spec.base_mva, bus_ids=spec.bus_ids, v_c=v_c,
                    hour=spec.hour, method=method)


def _tie_break(lp: LpProblem, spec: ManagementSpec, first: SolveResult,
               options: SolverOptions) -> SolveResult:
    """
    Among optimal points, prefer small |q| with earlier providers weighted most.

    Re-solves with the objective held within a relative 1e-9 of the optimum and
    Σ 2^{-j}·q*_j as the new objective.
    """
    if not spec.providers:
        return first
    bound = first.objective + OBJECTIVE_SLACK * max(1.0, abs(first.objective))
    weights = np.zeros(lp.num_variables)
    for j, provider in enumerate(spec.providers):
        weights[lp.index(q_abs_name(provider.id))] = 2.0 ** -j
    secondary = lp.with_rows(lp.cost, ["<="], [bound], ["optimal_cost"]).with_objective(weights)
    result = solve_lp(secondary, options)
    if not result.optimal:
        logger.warning("%s: tie-break solve returned %s; keeping the first optimum", lp.name,
                       result.status.value)
        return first
    return dataclasses.replace(result, objective=float(lp.cost @ result.x),
                               solve_time=first.solve_time + result.solve_time,
                               iterations=first.iterations + result.iterations,
                               nodes=first.nodes)


def solve_management(problem: Union[LpProblem, MilpProblem], spec: ManagementSpec,
                     options: Optional[SolverOptions] = None, method: str = "uvcp",
                     binding_buses: Sequence[int] = ()) -> Tuple[Strategy, SolveResult]:
    """
    Solve, tie-break and extract a strategy.

    Args:
        problem: Built management LP or MILP
        spec: Inputs the problem was built from
        options: Solver tolerances
        method: Strategy label
        binding_buses: Buses reported with an infeasibility

    Returns:
        Tuple of (Strategy, final SolveResult)
    """
    options = options or SolverOptions()
    if isinstance(problem, MilpProblem):
        first = solve_milp(problem, options)
        lp = problem.lp
        if first.optimal:
            # Tie-break over the chosen segment only
            fixed = list(problem.binaries)
            lower, upper = lp.lower.copy(), lp.upper.copy()
            lower[fixed] = upper[fixed] = np.round(first.x[fixed])
            lp = lp.with_bounds(lower, upper)
    else:
        first = solve_lp(problem, options)
        lp = problem

    if first.status is SolveStatus.INFEASIBLE:
        buses = list(binding_buses)
        detail = f" (risk spread exceeds the voltage band at buses {buses})" if buses else ""
        raise InfeasibleError(f"{lp.name} is infeasible{detail}", binding_buses=buses)
    if first.status is SolveStatus.UNBOUNDED:
        raise UnboundedError(f"{lp.name} is unbounded")

    final = _tie_break(lp, spec, first, options)
    strategy = extract_strategy(final, spec, method)
    logger.info("%s: %d variables, %d rows, cost %.6g, alpha %.3g, solved in %.4f s", lp.name,
                lp.num_variables, lp.num_constraints, strategy.cost, strategy.alpha,
                final.solve_time)
    return strategy, final
