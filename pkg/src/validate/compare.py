"""
UVC Voltage Risk - Method Comparison
Held-out evaluation of planning methods and the comparison report
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..errors import InfeasibleError, InputError
from ..grid.layout import UvcCoefficients
from ..grid.network import Network
from ..manage.methods import Planner
from ..manage.spec import Strategy
from .metrics import frequency_heatmap, var_confidence, violation_counts
from .scenarios import HeldOutData

logger = logging.getLogger(__name__)

EXCEEDANCE_TOLERANCE = 0.01
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DailyOutcome:
    """A method's plan for one held-out day and hour, with its uncurtailed VaR estimates."""

    day: pd.Timestamp
    hour: int
    strategy: Optional[Strategy]
    var_upper: np.ndarray
    var_lower: np.ndarray


@dataclass
class ValidationReport:
    """Held-out violation statistics of one method."""

    method: str
    tau: float
    bus_ids: Tuple[int, ...]
    hours: Tuple[int, ...]
    days: int
    upper: Dict[Tuple[int, int], float] = field(default_factory=dict)
    lower: Dict[Tuple[int, int], float] = field(default_factory=dict)
    tau_act_upper: Dict[int, float] = field(default_factory=dict)
    tau_act_lower: Dict[int, float] = field(default_factory=dict)
    costs: List[float] = field(default_factory=list)
    alphas: List[float] = field(default_factory=list)
    infeasible: List[str] = field(default_factory=list)

    @property
    def threshold(self) -> float:
        return 1.0 - self.tau

    def worst(self) -> Tuple[float, Optional[int], Optional[int], Optional[str]]:
        """(max frequency, bus, hour, side); ties resolve to the first in bus, hour, side order."""
        best = (0.0, None, None, None)
        for bus in self.bus_ids:
            for hour in self.hours:
                for side, table in (("upper", self.upper), ("lower", self.lower)):
                    value = table.get((bus, hour))
                    if value is not None and (best[1] is None or value > best[0]):
                        best = (value, bus, hour, side)
        return best

    @property
    def max_frequency(self) -> float:
        return self.worst()[0]

    @property
    def deviation(self) -> float:
        return abs(self.max_frequency - self.threshold)

    def passed(self, tolerance: float = EXCEEDANCE_TOLERANCE) -> bool:
        return self.max_frequency <= self.threshold + tolerance

    def heatmap(self, side: str) -> pd.DataFrame:
        table = self.upper if side == "upper" else self.lower
        return frequency_heatmap(table, self.bus_ids, self.hours)

    def to_dict(self) -> Dict[str, Any]:
        value, bus, hour, side = self.worst()
        costs = np.array(self.costs)
        alphas = np.array(self.alphas)
        return {
            "method": self.method,
            "tau": self.tau,
            "threshold": self.threshold,
            "days": self.days,
            "hours": list(self.hours),
            "max_frequency": value,
            "max_bus": bus,
            "max_hour": hour,
            "max_side": side,
            "deviation": self.deviation,
            "passed": self.passed(),
            "tau_act_upper": {str(b): v for b, v in self.tau_act_upper.items()},
            "tau_act_lower": {str(b): v for b, v in self.tau_act_lower.items()},
            "cost_mean": float(costs.mean()) if costs.size else 0.0,
            "cost_max": float(costs.max()) if costs.size else 0.0,
            "alpha_mean": float(alphas.mean()) if alphas.size else 0.0,
            "alpha_max": float(alphas.max()) if alphas.size else 0.0,
            "infeasible": list(self.infeasible),
            "frequencies": [
                {"bus": b, "hour": h, "upper": self.upper[(b, h)], "lower": self.lower[(b, h)]}
                for b in self.bus_ids for h in self.hours if (b, h) in self.upper
            ],
        }


def _unique_predictions(chi_pred: np.ndarray, zeta_pred: np.ndarray):
    """Distinct (χ̃, ζ̃) rows and, per day, the index of its row."""
    stacked = np.hstack([chi_pred, zeta_pred])
    if stacked.shape[1] == 0:
        return stacked[:1], np.zeros(stacked.shape[0], dtype=int)
    unique, inverse = np.unique(stacked, axis=0, return_inverse=True)
    return unique, inverse.reshape(-1)


def plan_days(planner: Planner, held: HeldOutData, hours: Sequence[int]) -> List[DailyOutcome]:
    """
    Run a planner on every held-out day and hour.

    Days sharing an hour's prediction share one plan. Infeasible hours keep
    their VaR estimates and carry no strategy.
    """
    days = held.days
    series = held.series
    G = len(series.gen_ids)
    by_hour = {}
    for hour in hours:
        rows = series.records(days, hour)
        unique, inverse = _unique_predictions(series.gen_pred[rows], series.load_pred[rows])
        plans = []
        for u, prediction in enumerate(unique):
            chi_pred, zeta_pred = prediction[:G], prediction[G:]
            var_upper, var_lower = planner.var_bounds(hour, chi_pred, zeta_pred)
            try:
                strategy, _ = planner.plan(hour, chi_pred, zeta_pred)
            except InfeasibleError as exc:
                first = days[int(np.argmax(inverse == u))]
                logger.warning("%s %s h%02d (%d days with this forecast): %s", planner.method,
                               first.date(), hour, int(np.count_nonzero(inverse == u)), exc)
                strategy = None
            plans.append((strategy, var_upper, var_lower))
        by_hour[hour] = inverse, plans
        logger.debug("%s h%02d: %d plans for %d days", planner.method, hour, len(plans), len(days))
    outcomes = []
    for k, day in enumerate(days):
        for hour in hours:
            inverse, plans = by_hour[hour]
            strategy, var_upper, var_lower = plans[inverse[k]]
            outcomes.append(DailyOutcome(day, hour, strategy, var_upper, var_lower))
    return outcomes


def build_report(method: str, outcomes: Sequence[DailyOutcome], held: HeldOutData,
                 coeffs: UvcCoefficients, net: Network, v_o, tau: float) -> ValidationReport:
    """
    Violation frequencies and VaR confidence levels of a method's outcomes.

    Realized voltages use the true injections curtailed by the strategy's α;
    confidence levels compare the uncurtailed VaR estimates with the
    uncurtailed realized UVC over every outcome, so a long test stream gives
    a correspondingly tight estimate.
    """
    if coeffs.bus_ids != net.bus_ids:
        raise InputError("coefficient and network buses must match")
    v_o = np.asarray(v_o, dtype=float)
    hours = tuple(sorted({o.hour for o in outcomes}))
    report = ValidationReport(method=method, tau=tau, bus_ids=net.bus_ids, hours=hours,
                              days=len({o.day for o in outcomes}))
    estimates_up, estimates_lo, realized = [], [], []
    for hour in hours:
        items = [o for o in outcomes if o.hour == hour]
        gen_part, load_part = held.uvc_parts(coeffs, [o.day for o in items], hour)
        estimates_up.append(np.array([o.var_upper for o in items]))
        estimates_lo.append(np.array([o.var_lower for o in items]))
        realized.append(gen_part - load_part)

        planned = np.array([o.strategy is not None for o in items], dtype=bool)
        report.infeasible.extend(f"{o.day.date()} h{hour:02d}" for o in items
                                 if o.strategy is None)
        strategies = [o.strategy for o in items if o.strategy is not None]
        if not strategies:
            continue
        alpha = np.array([s.alpha for s in strategies])
        v_c = np.array([s.v_c for s in strategies])
        v_r = (1.0 - alpha)[:, None] * gen_part[planned] - load_part[planned]
        above, below = violation_counts(v_r + v_c + v_o, net.v_min, net.v_max)
        for k, bus in enumerate(net.bus_ids):
            report.upper[(bus, hour)] = float(above[k] / len(strategies))
            report.lower[(bus, hour)] = float(below[k] / len(strategies))
        report.costs.extend(s.cost for s in strategies)
        report.alphas.extend(s.alpha for s in strategies)

    if outcomes:
        estimates_up, estimates_lo = np.vstack(estimates_up), np.vstack(estimates_lo)
        realized = np.vstack(realized)
        for k, bus in enumerate(net.bus_ids):
            report.tau_act_upper[bus] = var_confidence(estimates_up[:, k], realized[:, k], "upper")
            report.tau_act_lower[bus] = var_confidence(estimates_lo[:, k], realized[:, k], "lower")
    value, bus, hour, side = report.worst()
    logger.info("%s: max violation frequency %.4f (bus %s, hour %s, %s) over %d days", method,
                value, bus, hour, side, report.days)
    return report


def evaluate_method(planner: Planner, held: HeldOutData, hours: Sequence[int]) -> ValidationReport:
    """Plan every held-out day with ``planner`` and score the plans against the truth."""
    outcomes = plan_days(planner, held, hours)
    return build_report(planner.method, outcomes, held, planner.coeffs, planner.net, planner.v_o,
                        planner.tau)


def compare_methods(outcomes: Mapping[str, Sequence[DailyOutcome]], held: HeldOutData,
                    coeffs: UvcCoefficients, net: Network, v_o,
                    tau: float) -> Dict[str, ValidationReport]:
    """
    One report per named method, in sorted name order.

    Args:
        outcomes: Daily outcomes per method name, all for the same instance
        held: Held-out data
        coeffs: UVC coefficients
        net: Network with voltage limits
        v_o: Constant component per bus (pu²)
        tau: Confidence level

    Returns:
        ValidationReport per method
    """
    keys = {name: {(o.day, o.hour) for o in items} for name, items in outcomes.items()}
    if len({frozenset(k) for k in keys.values()}) > 1:
        raise InputError("methods were evaluated on different days or hours")
    return {name: build_report(name, outcomes[name], held, coeffs, net, v_o, tau)
            for name in sorted(outcomes)}


def comparison_summary(reports: Mapping[str, ValidationReport]) -> Dict[str, Any]:
    """
    Headline numbers per method plus the method closest to the desired risk level.

    Methods whose deviations agree within ``TIE_TOLERANCE`` are listed under
    ``tied`` and no single method is named closest.
    """
    summary = {
        name: {"max_frequency": r.max_frequency, "threshold": r.threshold,
               "deviation": r.deviation, "passed": r.passed(),
               "cost_mean": r.to_dict()["cost_mean"],
               "alpha_mean": r.to_dict()["alpha_mean"]}
        for name, r in reports.items()
    }
    tied: List[str] = []
    if reports:
        smallest = min(r.deviation for r in reports.values())
        tied = sorted(name for name, r in reports.items()
                      if r.deviation - smallest <= TIE_TOLERANCE)
    closest = tied[0] if len(tied) == 1 else None
    if len(tied) > 1:
        logger.info("Methods %s are equally close to the threshold", ", ".join(tied))
    return {"methods": summary, "closest_to_threshold": closest,
            "tied": tied if len(tied) > 1 else []}
