"""
UVC Voltage Risk - Branch and Bound
Best-first branch-and-bound over binary variables using LP relaxation bounds
"""

import heapq
import itertools
import logging
import time
from typing import Optional

import numpy as np

from ..errors import ResourceError
from .problem import MilpProblem, SolveResult, SolveStatus
from .simplex import SolverOptions, solve_lp

logger = logging.getLogger(__name__)


def _branch_variable(x: np.ndarray, binaries, tol: float) -> Optional[int]:
    """Most fractional binary, lowest index on ties; None when all are integral."""
    best, chosen = tol, None
    for j in binaries:
        distance = min(x[j], 1.0 - x[j])
        if distance > best:
            best, chosen = distance, j
    return chosen


def solve_milp(p: MilpProblem, options: Optional[SolverOptions] = None) -> SolveResult:
    """
    Solve a MILP whose integer variables are all binary.

    Nodes are explored in order of their relaxation objective (ties by creation
    order). A node is pruned once its bound cannot beat the incumbent. The final
    incumbent is re-solved with its binaries fixed at exactly 0 or 1.

    Args:
        p: Mixed-integer problem
        options: Tolerances and node limit

    Returns:
        SolveResult with integral binaries when optimal
    """
    options = options or SolverOptions()
    start = time.perf_counter()
    lp = p.lp
    iterations = 0

    root = solve_lp(lp, options)
    iterations += root.iterations
    if not root.optimal:
        return SolveResult(root.status, root.objective, root.x, lp.names,
                           time.perf_counter() - start, iterations, nodes=1)

    counter = itertools.count()
    heap = [(root.objective, next(counter), lp.lower.copy(), lp.upper.copy(), root)]
    incumbent: Optional[SolveResult] = None
    nodes = 1

    def gap(value: float) -> float:
        return 1e-9 * max(1.0, abs(value))

    while heap:
        bound, _, lower, upper, relaxed = heapq.heappop(heap)
        if incumbent is not None and bound >= incumbent.objective - gap(incumbent.objective):
            continue
        j = _branch_variable(relaxed.x, p.binaries, options.integrality_tol)
        if j is None:
            incumbent = relaxed
            logger.debug("New incumbent %.10g at node %d", relaxed.objective, nodes)
            continue
        for value in (0.0, 1.0):
            nodes += 1
            if nodes > options.node_limit:
                raise ResourceError(f"branch and bound exceeded {options.node_limit} nodes")
            child_lower, child_upper = lower.copy(), upper.copy()
            child_lower[j] = child_upper[j] = value
            child = solve_lp(lp.with_bounds(child_lower, child_upper), options)
            iterations += child.iterations
            if not child.optimal:
                continue
            if incumbent is None or child.objective < incumbent.objective - gap(incumbent.objective):
                heapq.heappush(heap, (child.objective, next(counter), child_lower, child_upper,
                                      child))

    if incumbent is None:
        return SolveResult(SolveStatus.INFEASIBLE, float("nan"),
                           np.full(lp.num_variables, np.nan), lp.names,
                           time.perf_counter() - start, iterations, nodes)

    fixed_lower, fixed_upper = lp.lower.copy(), lp.upper.copy()
    binaries = list(p.binaries)
    rounded = np.round(incumbent.x[binaries])
    fixed_lower[binaries] = rounded
    fixed_upper[binaries] = rounded
    polished = solve_lp(lp.with_bounds(fixed_lower, fixed_upper), options)
    iterations += polished.iterations
    final = polished if polished.optimal else incumbent
    elapsed = time.perf_counter() - start
    logger.debug("%s: branch and bound finished with %d nodes in %.4f s", lp.name, nodes, elapsed)
    return SolveResult(SolveStatus.OPTIMAL, final.objective, final.x, lp.names, elapsed,
                       iterations, nodes, final.residual)
