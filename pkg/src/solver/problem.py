"""
UVC Voltage Risk - Optimization Problems
Immutable LP/MILP carriers, an incremental builder, solve results and LP text export
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import InputError
from ..storage.atomic import atomic_write_text

INF = math.inf
SENSES = ("<=", ">=", "==")


@dataclass(frozen=True)
class LpProblem:
    """
    Minimize costᵀx subject to A x (<=, >=, ==) rhs and lower <= x <= upper.

    Built through ``LpBuilder``; arrays are read-only.
    """

    names: Tuple[str, ...]
    lower: np.ndarray
    upper: np.ndarray
    cost: np.ndarray
    A: np.ndarray
    senses: Tuple[str, ...]
    rhs: np.ndarray
    row_names: Tuple[str, ...]
    name: str = "problem"

    def __post_init__(self):
        n = len(self.names)
        m = len(self.senses)
        for attr, shape in (("lower", (n,)), ("upper", (n,)), ("cost", (n,)), ("A", (m, n)),
                            ("rhs", (m,))):
            array = np.array(getattr(self, attr), dtype=float).reshape(shape)
            array.setflags(write=False)
            object.__setattr__(self, attr, array)
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.cost))
                and np.all(np.isfinite(self.rhs))):
            raise InputError(f"{self.name}: coefficients must be finite")
        if np.any(self.lower > self.upper) or np.any(np.isnan(self.lower)) \
                or np.any(np.isnan(self.upper)):
            bad = int(np.flatnonzero(~(self.lower <= self.upper))[0])
            raise InputError(f"{self.name}: inconsistent bounds on {self.names[bad]}")
        if any(sense not in SENSES for sense in self.senses):
            raise InputError(f"{self.name}: constraint senses must be one of {SENSES}")

    @property
    def num_variables(self) -> int:
        return len(self.names)

    @property
    def num_constraints(self) -> int:
        return len(self.senses)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"{self.name} has no variable {name}") from None

    def with_bounds(self, lower: np.ndarray, upper: np.ndarray) -> "LpProblem":
        return LpProblem(self.names, lower, upper, self.cost, self.A, self.senses, self.rhs,
                         self.row_names, self.name)

    def with_objective(self, cost: np.ndarray) -> "LpProblem":
        return LpProblem(self.names, self.lower, self.upper, cost, self.A, self.senses, self.rhs,
                         self.row_names, self.name)

    def with_rows(self, coeffs: np.ndarray, senses: Sequence[str], rhs: Sequence[float],
                  row_names: Sequence[str]) -> "LpProblem":
        """Copy with extra constraint rows appended."""
        return LpProblem(self.names, self.lower, self.upper, self.cost,
                         np.vstack([self.A, np.atleast_2d(coeffs)]),
                         self.senses + tuple(senses), np.concatenate([self.rhs, rhs]),
                         self.row_names + tuple(row_names), self.name)

    def violation(self, x: np.ndarray) -> float:
        """Largest constraint or bound violation of a point, scaled by max(1, |rhs|)."""
        activity = self.A @ x
        scale = np.maximum(1.0, np.abs(self.rhs))
        gaps = np.zeros(self.num_constraints)
        for i, sense in enumerate(self.senses):
            if sense == "<=":
                gaps[i] = activity[i] - self.rhs[i]
            elif sense == ">=":
                gaps[i] = self.rhs[i] - activity[i]
            else:
                gaps[i] = abs(activity[i] - self.rhs[i])
        worst = float(np.max(gaps / scale, initial=0.0))
        bounds = max(float(np.max(self.lower - x, initial=0.0)),
                     float(np.max(x - self.upper, initial=0.0)))
        return max(worst, bounds)


class LpBuilder:
    """Incrementally collect variables and rows, then freeze them into an LpProblem."""

    def __init__(self, name: str = "problem"):
        self.name = name
        self._names: List[str] = []
        self._index: Dict[str, int] = {}
        self._lower: List[float] = []
        self._upper: List[float] = []
        self._cost: List[float] = []
        self._rows: List[Dict[int, float]] = []
        self._senses: List[str] = []
        self._rhs: List[float] = []
        self._row_names: List[str] = []

    def add_variable(self, name: str, lower: float = 0.0, upper: float = INF,
                     cost: float = 0.0) -> int:
        if name in self._index:
            raise InputError(f"duplicate variable {name}")
        self._index[name] = len(self._names)
        self._names.append(name)
        self._lower.append(float(lower))
        self._upper.append(float(upper))
        self._cost.append(float(cost))
        return self._index[name]

    def add_constraint(self, coeffs: Dict[Union[str, int], float], sense: str, rhs: float,
                       name: Optional[str] = None) -> int:
        if sense not in SENSES:
            raise InputError(f"unknown constraint sense {sense}")
        row: Dict[int, float] = {}
        for key, value in coeffs.items():
            column = self._index[key] if isinstance(key, str) else int(key)
            row[column] = row.get(column, 0.0) + float(value)
        self._rows.append(row)
        self._senses.append(sense)
        self._rhs.append(float(rhs))
        self._row_names.append(name or f"c{len(self._rows)}")
        return len(self._rows) - 1

    def index(self, name: str) -> int:
        return self._index[name]

    def build(self) -> LpProblem:
        A = np.zeros((len(self._rows), len(self._names)))
        for i, row in enumerate(self._rows):
            for column, value in row.items():
                A[i, column] = value
        return LpProblem(tuple(self._names), np.array(self._lower), np.array(self._upper),
                         np.array(self._cost), A, tuple(self._senses), np.array(self._rhs),
                         tuple(self._row_names), self.name)


@dataclass(frozen=True)
class MilpProblem:
    """An LP plus binary markers and ordered SOS2 groups."""

    lp: LpProblem
    binaries: Tuple[int, ...] = ()
    sos2: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "binaries", tuple(int(j) for j in self.binaries))
        object.__setattr__(self, "sos2", tuple(tuple(int(j) for j in group) for group in self.sos2))
        n = self.lp.num_variables
        for j in self.binaries:
            if not 0 <= j < n:
                raise InputError(f"binary index {j} out of range")
            if self.lp.lower[j] < 0.0 or self.lp.upper[j] > 1.0:
                raise InputError(f"binary {self.lp.names[j]} must have bounds within [0, 1]")
        for group in self.sos2:
            if any(not 0 <= j < n for j in group):
                raise InputError("SOS2 group references unknown variables")


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class SolveResult:
    """Solver outcome; ``x`` and ``objective`` are meaningful only when optimal."""

    status: SolveStatus
    objective: float
    x: np.ndarray
    names: Tuple[str, ...]
    solve_time: float = 0.0
    iterations: int = 0
    nodes: int = 0
    residual: float = 0.0
    _lookup: Dict[str, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_lookup", {name: k for k, name in enumerate(self.names)})

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL

    def value(self, name: str) -> float:
        return float(self.x[self._lookup[name]])


def _term(coefficient: float, name: str, first: bool) -> str:
    sign = "-" if coefficient < 0 else ("" if first else "+")
    magnitude = abs(coefficient)
    text = name if magnitude == 1.0 else f"{magnitude:.17g} {name}"
    return f"{sign} {text}".strip() if first else f" {sign} {text}"


def _expression(coefficients: np.ndarray, names: Sequence[str]) -> str:
    parts = []
    for j in np.flatnonzero(coefficients):
        parts.append(_term(float(coefficients[j]), names[j], not parts))
    return "".join(parts) if parts else "0"


def lp_text(problem: Union[LpProblem, MilpProblem]) -> str:
    """Render a problem in CPLEX LP text format."""
    milp = problem if isinstance(problem, MilpProblem) else None
    lp = milp.lp if milp else problem
    lines = [f"\\ {lp.name}", "Minimize", f" obj: {_expression(lp.cost, lp.names)}", "Subject To"]
    symbol = {"<=": "<=", ">=": ">=", "==": "="}
    for i in range(lp.num_constraints):
        lines.append(f" {lp.row_names[i]}: {_expression(lp.A[i], lp.names)} "
                     f"{symbol[lp.senses[i]]} {lp.rhs[i]:.17g}")
    lines.append("Bounds")
    for j, name in enumerate(lp.names):
        lo, hi = lp.lower[j], lp.upper[j]
        if math.isinf(lo) and math.isinf(hi):
            lines.append(f" {name} free")
        elif math.isinf(hi):
            lines.append(f" {name} >= {lo:.17g}")
        else:
            low = "-inf" if math.isinf(lo) else f"{lo:.17g}"
            lines.append(f" {low} <= {name} <= {hi:.17g}")
    if milp and milp.binaries:
        lines.append("Binaries")
        lines.append(" " + " ".join(lp.names[j] for j in milp.binaries))
    if milp and milp.sos2:
        lines.append("SOS")
        for k, group in enumerate(milp.sos2, start=1):
            members = " ".join(f"{lp.names[j]}:{rank}" for rank, j in enumerate(group, start=1))
            lines.append(f" s{k}: S2:: {members}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def write_lp(problem: Union[LpProblem, MilpProblem], path: str) -> str:
    return atomic_write_text(path, lp_text(problem))
