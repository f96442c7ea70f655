"""
UVC Voltage Risk - Simplex Solver
Dense bounded-variable revised simplex with Bland's rule and a two-phase start
"""

import logging
import math
import time
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from ..errors import NumericError
from .problem import LpProblem, SolveResult, SolveStatus

logger = logging.getLogger(__name__)

AT_LOWER, AT_UPPER, FREE_ZERO, BASIC = 0, 1, 2, 3


@dataclass(frozen=True)
class SolverOptions:
    """Tolerances and limits shared by the LP and MILP solvers."""

    pivot_tol: float = 1e-10
    residual_tol: float = 1e-8
    optimality_tol: float = 1e-9
    integrality_tol: float = 1e-6
    max_iterations: Optional[int] = None
    node_limit: int = 1_000_000


class _BoundedSimplex:
    """
    Working state of one LP solve.

    Columns are ordered structural variables, then one slack per row, then one
    artificial per row. Slack bounds encode the row sense: [0, inf) for <=,
    (-inf, 0] for >= and [0, 0] for equalities.
    """

    def __init__(self, p: LpProblem, options: SolverOptions):
        self.options = options
        m, n = p.A.shape
        self.m, self.n = m, n
        slack_lo = np.array([-math.inf if s == ">=" else 0.0 for s in p.senses])
        slack_hi = np.array([math.inf if s == "<=" else 0.0 for s in p.senses])
        self.lo = np.concatenate([p.lower, slack_lo, np.zeros(m)])
        self.hi = np.concatenate([p.upper, slack_hi, np.zeros(m)])
        self.b = p.rhs.copy()
        self.cols = np.hstack([p.A, np.eye(m), np.eye(m)])

        N = n + 2 * m
        self.status = np.empty(N, dtype=int)
        for j in range(N):
            if math.isfinite(self.lo[j]):
                self.status[j] = AT_LOWER
            elif math.isfinite(self.hi[j]):
                self.status[j] = AT_UPPER
            else:
                self.status[j] = FREE_ZERO

        residual = self.b - self.cols[:, :n] @ self.nonbasic_values()[:n]
        self.basis = np.empty(m, dtype=int)
        self.artificials = []
        for i in range(m):
            slack = n + i
            if self.lo[slack] <= residual[i] <= self.hi[slack]:
                self.basis[i] = slack
            else:
                art = n + m + i
                self.cols[i, art] = 1.0 if residual[i] > 0.0 else -1.0
                self.hi[art] = math.inf
                self.basis[i] = art
                self.artificials.append(art)
            self.status[self.basis[i]] = BASIC
        self.iterations = 0
        self.max_iterations = options.max_iterations or 50 * (m + N) + 1000

    def nonbasic_values(self) -> np.ndarray:
        x = np.zeros(len(self.status))
        x[self.status == AT_LOWER] = self.lo[self.status == AT_LOWER]
        x[self.status == AT_UPPER] = self.hi[self.status == AT_UPPER]
        return x

    def factor(self):
        B = self.cols[:, self.basis]
        lu, piv = lu_factor(B, check_finite=False)
        pivots = np.abs(np.diag(lu))
        if pivots.size and pivots.min() <= 1e-13 * max(1.0, pivots.max()):
            raise NumericError(f"basis matrix is numerically singular after {self.iterations} "
                               f"iterations (smallest pivot {pivots.min():.3g})")
        return lu, piv

    def point(self, factors) -> np.ndarray:
        x = self.nonbasic_values()
        x[self.basis] = lu_solve(factors, self.b - self.cols @ x, check_finite=False)
        return x

    def run(self, cost: np.ndarray) -> str:
        """Iterate to optimality for ``cost``; returns "optimal" or "unbounded"."""
        tol = self.options.optimality_tol
        pivot_tol = self.options.pivot_tol
        while True:
            self.iterations += 1
            if self.iterations > self.max_iterations:
                raise NumericError(f"simplex exceeded {self.max_iterations} iterations")
            factors = self.factor()
            x = self.point(factors)
            y = lu_solve(factors, cost[self.basis], trans=1, check_finite=False)
            d = cost - self.cols.T @ y

            movable = self.lo < self.hi
            up = movable & ((self.status == AT_LOWER) | (self.status == FREE_ZERO)) & (d < -tol)
            down = movable & ((self.status == AT_UPPER) | (self.status == FREE_ZERO)) & (d > tol)
            candidates = np.flatnonzero(up | down)
            if candidates.size == 0:
                return "optimal"
            # Bland: lowest-index improving column enters
            j = int(candidates[0])
            direction = 1.0 if up[j] else -1.0

            w = lu_solve(factors, self.cols[:, j], check_finite=False)
            rate = -direction * w
            xB = x[self.basis]
            lo_B = self.lo[self.basis]
            hi_B = self.hi[self.basis]
            limits = np.full(self.m, math.inf)
            falling = (rate < -pivot_tol) & np.isfinite(lo_B)
            rising = (rate > pivot_tol) & np.isfinite(hi_B)
            limits[falling] = (xB[falling] - lo_B[falling]) / -rate[falling]
            limits[rising] = (hi_B[rising] - xB[rising]) / rate[rising]
            limits = np.maximum(limits, 0.0)

            flip = self.hi[j] - self.lo[j]
            best = limits.min() if self.m else math.inf
            if flip <= best:
                if math.isinf(flip):
                    return "unbounded"
                self.status[j] = AT_UPPER if direction > 0 else AT_LOWER
                continue
            ties = np.flatnonzero(limits <= best + 1e-12)
            # Bland: among tied rows, the lowest-index basic variable leaves
            r = int(ties[np.argmin(self.basis[ties])])
            leaving = int(self.basis[r])
            self.status[leaving] = AT_LOWER if falling[r] else AT_UPPER
            self.status[j] = BASIC
            self.basis[r] = j
            logger.debug("pivot %d: column %d enters, column %d leaves, step %.3g",
                         self.iterations, j, leaving, best)


def _result(p: LpProblem, status: SolveStatus, x: Optional[np.ndarray], start: float,
            iterations: int, residual: float = 0.0) -> SolveResult:
    if x is None:
        x = np.full(p.num_variables, math.nan)
        objective = math.nan if status is SolveStatus.INFEASIBLE else -math.inf
    else:
        objective = float(p.cost @ x)
    return SolveResult(status=status, objective=objective, x=x, names=p.names,
                       solve_time=time.perf_counter() - start, iterations=iterations,
                       residual=residual)


def _solve_box(p: LpProblem, start: float) -> SolveResult:
    """Problems without rows: every variable sits at its cheaper bound."""
    x = np.where(p.cost > 0.0, p.lower, np.where(p.cost < 0.0, p.upper, p.lower))
    x = np.where(np.isinf(x) & (p.cost == 0.0), np.where(np.isfinite(p.upper), p.upper, 0.0), x)
    if np.any(np.isinf(x)):
        return _result(p, SolveStatus.UNBOUNDED, None, start, 0)
    return _result(p, SolveStatus.OPTIMAL, x.astype(float), start, 0)


def solve_lp(p: LpProblem, options: Optional[SolverOptions] = None) -> SolveResult:
    """
    Solve a linear program.

    Phase one minimizes the sum of artificial variables needed for rows whose
    initial residual its slack cannot absorb; phase two fixes those artificials
    at zero and minimizes the real objective. Entering and leaving columns follow
    Bland's rule, so equal inputs always give the same vertex.

    Args:
        p: Problem to solve
        options: Tolerances; defaults when omitted

    Returns:
        SolveResult with status optimal, infeasible or unbounded
    """
    options = options or SolverOptions()
    start = time.perf_counter()
    if p.num_constraints == 0:
        return _solve_box(p, start)
    state = _BoundedSimplex(p, options)
    N = len(state.status)

    if state.artificials:
        phase_one = np.zeros(N)
        phase_one[state.artificials] = 1.0
        state.run(phase_one)
        x = state.point(state.factor())
        infeasibility = float(x[state.artificials].sum())
        if infeasibility > options.residual_tol * max(1.0, float(np.max(np.abs(p.rhs), initial=0.0))):
            logger.debug("%s infeasible: phase one ends at %.3g", p.name, infeasibility)
            return _result(p, SolveStatus.INFEASIBLE, None, start, state.iterations)
        state.hi[p.num_variables + p.num_constraints:] = 0.0

    cost = np.concatenate([p.cost, np.zeros(N - p.num_variables)])
    if state.run(cost) == "unbounded":
        return _result(p, SolveStatus.UNBOUNDED, None, start, state.iterations)

    x = state.point(state.factor())[:p.num_variables]
    x = np.clip(x, p.lower, p.upper)
    residual = p.violation(x)
    if residual > options.residual_tol:
        raise NumericError(f"{p.name}: optimal point violates constraints by {residual:.3g} "
                           f"after {state.iterations} iterations")
    result = _result(p, SolveStatus.OPTIMAL, x, start, state.iterations, residual)
    logger.debug("%s solved: objective %.10g in %d iterations (%.4f s)", p.name,
                 result.objective, result.iterations, result.solve_time)
    return result
