"""
UVC Voltage Risk - Risk Profiles
Per-bus UVC risk at one hour and the CSV risk report
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List

import pandas as pd

from ..density.gmm import Gmm1
from ..errors import InputError
from ..storage.atomic import atomic_write_csv
from .measures import uvc_risk

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["bus", "hour", "tau", "var_up", "var_lo", "cvar_up", "cvar_lo"]
REPORT_FLOAT_FORMAT = "%.12g"


@dataclass(frozen=True)
class RiskProfile:
    """VaR and CVaR of a bus's uncertain voltage component (pu²)."""

    bus: int
    hour: int
    tau: float
    var_upper: float
    var_lower: float
    cvar_upper: float
    cvar_lower: float

    @property
    def valid(self) -> bool:
        return all(math.isfinite(v) for v in
                   (self.var_upper, self.var_lower, self.cvar_upper, self.cvar_lower))

    def spread(self, cvar: bool = False) -> float:
        """Width between the upper and lower risk bounds."""
        if cvar:
            return self.cvar_upper - self.cvar_lower
        return self.var_upper - self.var_lower


def profile_from_model(g: Gmm1, bus: int, hour: int, tau: float) -> RiskProfile:
    risk = uvc_risk(g, tau)
    return RiskProfile(bus=bus, hour=hour, tau=tau, var_upper=risk.var_upper,
                       var_lower=risk.var_lower, cvar_upper=risk.cvar_upper,
                       cvar_lower=risk.cvar_lower)


def missing_profile(bus: int, hour: int, tau: float) -> RiskProfile:
    """Placeholder row for a (bus, hour) without a model."""
    nan = float("nan")
    return RiskProfile(bus, hour, tau, nan, nan, nan, nan)


def profiles_to_frame(profiles: Iterable[RiskProfile]) -> pd.DataFrame:
    rows = [[p.bus, p.hour, p.tau, p.var_upper, p.var_lower, p.cvar_upper, p.cvar_lower]
            for p in profiles]
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def write_risk_report(profiles: Iterable[RiskProfile], path: str) -> str:
    """Write ``bus,hour,tau,var_up,var_lo,cvar_up,cvar_lo`` with 12 significant digits."""
    return atomic_write_csv(path, profiles_to_frame(profiles), float_format=REPORT_FLOAT_FORMAT)


def read_risk_report(path: str) -> List[RiskProfile]:
    frame = pd.read_csv(path)
    missing = [c for c in REPORT_COLUMNS if c not in frame.columns]
    if missing:
        raise InputError(f"missing columns: {', '.join(missing)}", path=path, line=1)
    return [RiskProfile(int(row.bus), int(row.hour), float(row.tau), float(row.var_up),
                        float(row.var_lo), float(row.cvar_up), float(row.cvar_lo))
            for row in frame.itertuples(index=False)]
