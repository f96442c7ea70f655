"""
UVC Voltage Risk - Management Specification
Inputs of the risk-management problems, piecewise-linear risk tables and strategies
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..errors import InputError
from ..grid.layout import InjectionLayout, Provider, UvcCoefficients, constant_voltage
from ..grid.network import Network
from ..storage.atomic import atomic_write_json

DEFAULT_ALPHA_POINTS = 21
BIG_M_FACTOR = 1e4


class RiskVariant(Enum):
    VAR = "var"
    CVAR = "cvar"

    @classmethod
    def parse(cls, value) -> "RiskVariant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InputError(f"unknown risk variant '{value}' (expected var or cvar)") from None


def alpha_grid(points: int = DEFAULT_ALPHA_POINTS) -> np.ndarray:
    """Uniform curtailment grid on [0, 1]."""
    if points < 2:
        raise InputError(f"the curtailment grid needs at least 2 points, got {points}")
    return np.linspace(0.0, 1.0, points)


def default_big_m(providers) -> float:
    """10⁴·Σ c_j·max(|q_min|, q_max); 10⁴ when no provider has a cost."""
    scale = sum(p.cost * max(abs(p.q_min), p.q_max) for p in providers)
    return BIG_M_FACTOR * scale if scale > 0.0 else BIG_M_FACTOR


@dataclass(frozen=True)
class ManagementSpec:
    """
    Everything except the risk terms that a management problem needs.

    Voltage arrays (pu²) follow ``bus_ids``; ``b_q`` has one column per provider.
    ``v_o`` already contains the fixed provider active power contribution.
    """

    bus_ids: Tuple[int, ...]
    providers: Tuple[Provider, ...]
    b_q: np.ndarray
    v_min: np.ndarray
    v_max: np.ndarray
    v_o: np.ndarray
    tau: float = 0.95
    variant: RiskVariant = RiskVariant.VAR
    curtailment: bool = False
    alphas: np.ndarray = field(default_factory=alpha_grid)
    big_m: Optional[float] = None
    base_mva: float = 1.0
    hour: int = 0

    def __post_init__(self):
        object.__setattr__(self, "bus_ids", tuple(self.bus_ids))
        object.__setattr__(self, "providers", tuple(self.providers))
        object.__setattr__(self, "variant", RiskVariant.parse(self.variant))
        n, J = len(self.bus_ids), len(self.providers)
        for name, shape in (("b_q", (n, J)), ("v_min", (n,)), ("v_max", (n,)), ("v_o", (n,)),
                            ("alphas", None)):
            array = np.array(getattr(self, name), dtype=float)
            if shape is not None and array.shape != shape:
                raise InputError(f"{name} must have shape {shape}, got {array.shape}")
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        if not 0.0 < self.tau < 1.0:
            raise InputError(f"confidence level must lie in (0, 1), got {self.tau}")
        a = self.alphas
        if a.ndim != 1 or a.size < 2 or a[0] != 0.0 or a[-1] != 1.0 or np.any(np.diff(a) <= 0.0):
            raise InputError("curtailment grid must increase strictly from 0 to 1")
        if self.big_m is None:
            object.__setattr__(self, "big_m", default_big_m(self.providers))
        if not self.big_m > 0.0:
            raise InputError("curtailment penalty M must be positive")

    @property
    def costs(self) -> np.ndarray:
        return np.array([p.cost for p in self.providers])

    def row(self, bus: int) -> int:
        return self.bus_ids.index(bus)


def management_spec(net: Network, layout: InjectionLayout, coeffs: UvcCoefficients,
                    tau: float = 0.95, variant="var", curtailment: bool = False,
                    alpha_points: int = DEFAULT_ALPHA_POINTS, base_mva: float = 1.0,
                    hour: int = 0, big_m: Optional[float] = None) -> ManagementSpec:
    """Assemble a ManagementSpec from the network, layout and coefficients."""
    return ManagementSpec(
        bus_ids=coeffs.bus_ids, providers=layout.providers, b_q=coeffs.b_q, v_min=net.v_min,
        v_max=net.v_max, v_o=constant_voltage(coeffs, layout, net.v0), tau=tau, variant=variant,
        curtailment=curtailment, alphas=alpha_grid(alpha_points), big_m=big_m,
        base_mva=base_mva, hour=hour)


@dataclass(frozen=True)
class PwlRiskTable:
    """
    Risk bounds of one bus sampled on the curtailment grid.

    ``beta`` holds the upper risk term and ``gamma`` the risk of the negated UVC,
    so the lower voltage bound at α_l is -gamma[l].
    """

    bus: int
    alphas: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        for name in ("alphas", "beta", "gamma"):
            array = np.array(getattr(self, name), dtype=float)
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        if not (self.alphas.shape == self.beta.shape == self.gamma.shape):
            raise InputError(f"bus {self.bus}: table columns differ in length")
        if not (np.all(np.isfinite(self.beta)) and np.all(np.isfinite(self.gamma))):
            raise InputError(f"bus {self.bus}: table entries must be finite")

    def interpolate(self, alpha: float) -> Tuple[float, float]:
        """Piecewise-linear (beta, gamma) at ``alpha``."""
        return (float(np.interp(alpha, self.alphas, self.beta)),
                float(np.interp(alpha, self.alphas, self.gamma)))


@dataclass(frozen=True)
class Strategy:
    """Solved reactive dispatch (Mvar), controllable voltage parts (pu²) and curtailment."""

    variant: str
    tau: float
    alpha: float
    cost: float
    provider_ids: Tuple[str, ...]
    q: np.ndarray
    q_abs: np.ndarray
    bus_ids: Tuple[int, ...]
    v_c: np.ndarray
    hour: int = 0
    method: str = "uvcp"

    def __post_init__(self):
        for name in ("q", "q_abs", "v_c"):
            array = np.array(getattr(self, name), dtype=float)
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        object.__setattr__(self, "provider_ids", tuple(self.provider_ids))
        object.__setattr__(self, "bus_ids", tuple(self.bus_ids))
        if not 0.0 <= self.alpha <= 1.0:
            raise InputError(f"curtailment ratio {self.alpha} outside [0, 1]")

    def v_c_of(self, bus: int) -> float:
        return float(self.v_c[self.bus_ids.index(bus)])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "variant": self.variant,
            "method": self.method,
            "hour": self.hour,
            "tau": self.tau,
            "alpha": self.alpha,
            "cost": self.cost,
            "q": [{"id": i, "mvar": float(v)} for i, v in zip(self.provider_ids, self.q)],
            "v_c": [{"bus": b, "pu2": float(v)} for b, v in zip(self.bus_ids, self.v_c)],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Strategy":
        try:
            q = np.array([item["mvar"] for item in data["q"]], dtype=float)
            return cls(variant=data["variant"], tau=float(data["tau"]),
                       alpha=float(data["alpha"]), cost=float(data["cost"]),
                       provider_ids=tuple(item["id"] for item in data["q"]), q=q,
                       q_abs=np.abs(q), bus_ids=tuple(int(item["bus"]) for item in data["v_c"]),
                       v_c=np.array([item["pu2"] for item in data["v_c"]], dtype=float),
                       hour=int(data.get("hour", 0)), method=data.get("method", "uvcp"))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed strategy document: {exc}") from exc


def write_strategy(strategy: Strategy, path: str) -> str:
    return atomic_write_json(path, strategy.to_dict())


def read_strategy(path: str) -> Strategy:
    with open(path, "r") as f:
        try:
            return Strategy.from_dict(json.load(f))
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from exc
