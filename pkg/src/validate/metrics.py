"""
UVC Voltage Risk - Validation Metrics
Voltage violation frequencies, empirical VaR confidence levels and heatmap tables
"""

from dataclasses import dataclass
from typing import Mapping, Sequence, Tuple

import numpy as np
import pandas as pd

from ..errors import InputError
from ..grid.network import Network
from ..manage.spec import Strategy
from .scenarios import ScenarioSet

SIDES = ("upper", "lower")


@dataclass(frozen=True)
class ViolationFrequencies:
    """Share of scenarios above v_max (upper) and below v_min (lower) per bus."""

    bus_ids: Tuple[int, ...]
    upper: np.ndarray
    lower: np.ndarray
    count: int

    def side(self, name: str) -> np.ndarray:
        if name not in SIDES:
            raise InputError(f"unknown side {name}")
        return self.upper if name == "upper" else self.lower

    @property
    def max_frequency(self) -> float:
        return float(max(np.max(self.upper, initial=0.0), np.max(self.lower, initial=0.0)))


def violation_counts(voltages: np.ndarray, v_min: np.ndarray,
                     v_max: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Per-bus counts of v > v_max and v < v_min over scenario rows."""
    voltages = np.atleast_2d(voltages)
    return (np.count_nonzero(voltages > v_max, axis=0),
            np.count_nonzero(voltages < v_min, axis=0))


def violation_frequency(strategy: Strategy, scenarios: ScenarioSet, net: Network,
                        v_o) -> ViolationFrequencies:
    """
    Empirical violation frequencies of a strategy.

    Each scenario voltage is its UVC plus the strategy's v_c plus v_o.

    Args:
        strategy: Solved dispatch
        scenarios: Realized UVC values
        net: Network with the voltage limits
        v_o: Constant component per bus (pu²)

    Returns:
        ViolationFrequencies in network bus order
    """
    if scenarios.bus_ids != net.bus_ids or strategy.bus_ids != net.bus_ids:
        raise InputError("scenario, strategy and network buses must match")
    v_o = np.asarray(v_o, dtype=float)
    if v_o.shape != (len(net.bus_ids),):
        raise InputError(f"v_o must have length {len(net.bus_ids)}")
    voltages = scenarios.values + strategy.v_c + v_o
    upper, lower = violation_counts(voltages, net.v_min, net.v_max)
    N = scenarios.count
    return ViolationFrequencies(net.bus_ids, upper / N, lower / N, N)


def var_confidence(estimates: Sequence[float], realized: Sequence[float], side: str) -> float:
    """
    Empirical confidence level of a VaR estimate series.

    Upper side: share of days whose estimate exceeds the realization.
    Lower side: share of days whose estimate lies below it. Ties count as misses.
    """
    estimates = np.asarray(estimates, dtype=float).ravel()
    realized = np.asarray(realized, dtype=float).ravel()
    if estimates.size != realized.size or estimates.size < 1:
        raise InputError(f"need equal, nonempty series; got {estimates.size} estimates and "
                         f"{realized.size} realizations")
    if side == "upper":
        hits = estimates > realized
    elif side == "lower":
        hits = estimates < realized
    else:
        raise InputError(f"unknown side {side}")
    return float(np.mean(hits))


def frequency_heatmap(frequencies: Mapping[Tuple[int, int], float], bus_ids: Sequence[int],
                      hours: Sequence[int]) -> pd.DataFrame:
    """Rows are buses and columns hours; cells without data are NaN."""
    table = pd.DataFrame(np.nan, index=pd.Index(list(bus_ids), name="bus"),
                         columns=[int(h) for h in hours])
    for (bus, hour), value in frequencies.items():
        table.loc[bus, hour] = value
    return table
