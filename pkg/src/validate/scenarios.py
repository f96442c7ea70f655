"""
UVC Voltage Risk - Scenarios
Monte-Carlo UVC scenarios drawn from conditional models and held-out realized injections
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from ..density.gmm import Gmm1
from ..errors import InputError
from ..grid.layout import UvcCoefficients
from ..uvc.series import InjectionSeries

logger = logging.getLogger(__name__)


class Provenance(Enum):
    SAMPLED = "sampled-from-model"
    HELD_OUT = "held-out-history"


def spawn_generators(seed: int, count: int) -> List[np.random.Generator]:
    """Independent counter-based streams derived from one seed."""
    return [np.random.Generator(np.random.Philox(child))
            for child in np.random.SeedSequence(seed).spawn(count)]


@dataclass(frozen=True)
class ScenarioSet:
    """Realized UVC values (pu²), scenarios by buses in ``bus_ids`` order."""

    bus_ids: Tuple[int, ...]
    values: np.ndarray
    provenance: Provenance = Provenance.SAMPLED
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "bus_ids", tuple(self.bus_ids))
        values = np.array(self.values, dtype=float).reshape(-1, len(self.bus_ids))
        if values.shape[0] < 1:
            raise InputError("a scenario set needs at least one scenario")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def count(self) -> int:
        return self.values.shape[0]

    def column(self, bus: int) -> np.ndarray:
        return self.values[:, self.bus_ids.index(bus)]


def sample_scenarios(models: Mapping[int, Gmm1], count: int, seed: int = 0) -> ScenarioSet:
    """
    Draw i.i.d. scenarios from each bus's conditional UVC model.

    Every bus draws from its own stream spawned from ``seed``, so the result
    does not depend on evaluation order.

    Args:
        models: Conditional mixture per bus id
        count: Scenarios per bus
        seed: Root seed

    Returns:
        ScenarioSet with provenance SAMPLED
    """
    if count < 1:
        raise InputError(f"scenario count must be at least 1, got {count}")
    bus_ids = tuple(models)
    streams = spawn_generators(seed, len(bus_ids))
    values = np.column_stack([models[bus].sample(count, rng)
                              for bus, rng in zip(bus_ids, streams)]) if bus_ids \
        else np.zeros((count, 0))
    logger.debug("Sampled %d scenarios for %d buses (seed %d)", count, len(bus_ids), seed)
    return ScenarioSet(bus_ids, values, Provenance.SAMPLED, seed)


@dataclass(frozen=True)
class HeldOutData:
    """Held-out days with true and day-ahead predicted injections."""

    series: InjectionSeries

    @property
    def days(self) -> pd.DatetimeIndex:
        return self.series.days

    def predictions(self, day, hour: int) -> Tuple[np.ndarray, np.ndarray]:
        """Day-ahead (χ̃, ζ̃) at ``day`` and ``hour``."""
        k = self.series.record(day, hour)
        return self.series.gen_pred[k], self.series.load_pred[k]

    def realized(self, day, hour: int) -> Tuple[np.ndarray, np.ndarray]:
        """True (χ, ζ) at ``day`` and ``hour``."""
        k = self.series.record(day, hour)
        return self.series.gen_true[k], self.series.load_true[k]

    def realized_uvc(self, coeffs: UvcCoefficients, day, hour: int,
                     alpha: float = 0.0) -> np.ndarray:
        """True UVC of every bus under curtailment ``alpha``."""
        chi, zeta = self.realized(day, hour)
        return (1.0 - alpha) * (coeffs.b_gen @ chi) - coeffs.b_load @ zeta

    def uvc_parts(self, coeffs: UvcCoefficients, days,
                  hour: int) -> Tuple[np.ndarray, np.ndarray]:
        """Generation and load parts of the true UVC, days by buses; UVC = (1-α)·gen - load."""
        rows = self.series.records(days, hour)
        return (self.series.gen_true[rows] @ coeffs.b_gen.T,
                self.series.load_true[rows] @ coeffs.b_load.T)

    def scenarios(self, coeffs: UvcCoefficients, hour: int, alpha: float = 0.0) -> ScenarioSet:
        """One realized scenario per held-out day at ``hour``."""
        values = np.array([self.realized_uvc(coeffs, day, hour, alpha) for day in self.days])
        return ScenarioSet(coeffs.bus_ids, values, Provenance.HELD_OUT)
