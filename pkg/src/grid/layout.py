"""
UVC Voltage Risk - Injection Layout
Placement and roles of generators, loads and reactive providers, and UVC coefficients
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from ..errors import InputError
from .network import Network
from .sensitivity import SensitivityMatrices

logger = logging.getLogger(__name__)

ROLES = ("ugen", "uload", "cgen", "cload", "provider")


@dataclass(frozen=True)
class UncertainElement:
    """Generator or load whose output is forecast. ``rating`` is only used to synthesize data."""

    id: str
    bus: int
    kappa: float = 0.0
    rating: float = 0.0


@dataclass(frozen=True)
class ConstantElement:
    """Generator or load with fixed active power ``p`` (pu)."""

    id: str
    bus: int
    kappa: float
    p: float


@dataclass(frozen=True)
class Provider:
    """Controllable reactive-power provider with cost in $/Mvar."""

    id: str
    bus: int
    q_min: float
    q_max: float
    cost: float
    p: float = 0.0

    def __post_init__(self):
        if not self.q_min <= self.q_max:
            raise InputError(f"provider {self.id}: q_min {self.q_min} exceeds q_max {self.q_max}")
        if not self.cost >= 0.0:
            raise InputError(f"provider {self.id}: cost must be nonnegative")


@dataclass(frozen=True)
class InjectionLayout:
    """
    Roles and placement of every injection in the feeder.

    Element ids are unique across all roles.
    """

    uncertain_gens: Tuple[UncertainElement, ...] = ()
    uncertain_loads: Tuple[UncertainElement, ...] = ()
    constant_gens: Tuple[ConstantElement, ...] = ()
    constant_loads: Tuple[ConstantElement, ...] = ()
    providers: Tuple[Provider, ...] = ()

    def __post_init__(self):
        for name in ("uncertain_gens", "uncertain_loads", "constant_gens",
                     "constant_loads", "providers"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        ids = [element.id for element in self.elements()]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise InputError(f"duplicate element ids: {', '.join(duplicates)}")
        for element in self.elements():
            if not math.isfinite(getattr(element, "kappa", 0.0)):
                raise InputError(f"element {element.id}: kappa must be finite")

    def elements(self) -> List:
        return (list(self.uncertain_gens) + list(self.uncertain_loads) + list(self.constant_gens)
                + list(self.constant_loads) + list(self.providers))

    @property
    def gen_ids(self) -> Tuple[str, ...]:
        return tuple(g.id for g in self.uncertain_gens)

    @property
    def load_ids(self) -> Tuple[str, ...]:
        return tuple(d.id for d in self.uncertain_loads)

    @property
    def provider_ids(self) -> Tuple[str, ...]:
        return tuple(j.id for j in self.providers)

    def validate(self, net: Network):
        """Check that every element sits on an existing non-slack bus."""
        allowed = set(net.bus_ids)
        for element in self.elements():
            if element.bus not in allowed:
                raise InputError(f"element {element.id} placed on unknown or slack bus {element.bus}")


@dataclass(frozen=True)
class UvcCoefficients:
    """
    Squared-voltage sensitivity of each bus to each layout element.

    Rows follow ``bus_ids``; columns follow the layout order of each role.
    """

    bus_ids: Tuple[int, ...]
    b_gen: np.ndarray
    b_load: np.ndarray
    b_q: np.ndarray
    b_p: np.ndarray
    b_const_gen: np.ndarray
    b_const_load: np.ndarray
    gen_ids: Tuple[str, ...] = ()
    load_ids: Tuple[str, ...] = ()
    provider_ids: Tuple[str, ...] = ()
    _index: Dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for name in ("b_gen", "b_load", "b_q", "b_p", "b_const_gen", "b_const_load"):
            matrix = np.array(getattr(self, name), dtype=float)
            if matrix.ndim != 2 or matrix.shape[0] != len(self.bus_ids):
                raise InputError(f"{name} must have one row per bus, got shape {matrix.shape}")
            matrix.setflags(write=False)
            object.__setattr__(self, name, matrix)
        object.__setattr__(self, "_index", {bus: k for k, bus in enumerate(self.bus_ids)})

    def row(self, bus: int) -> int:
        try:
            return self._index[bus]
        except KeyError:
            raise InputError(f"bus {bus} is unknown or is the slack bus") from None


def _columns(sens: SensitivityMatrices, elements, reactive_only: bool = False,
             active_only: bool = False) -> np.ndarray:
    columns = np.zeros((sens.size, len(elements)))
    for k, element in enumerate(elements):
        position = sens.index(element.bus)
        if reactive_only:
            columns[:, k] = sens.X[:, position]
        elif active_only:
            columns[:, k] = sens.R[:, position]
        else:
            columns[:, k] = sens.R[:, position] + element.kappa * sens.X[:, position]
    return columns


def uvc_coefficients(sens: SensitivityMatrices, layout: InjectionLayout) -> UvcCoefficients:
    """
    Combine sensitivities with the layout: b = R[:, bus] + κ·X[:, bus].

    Providers get separate reactive (b_q = X column) and active (b_p = R column)
    coefficients.

    Args:
        sens: Sensitivity matrices of the network
        layout: Injection layout on the same network

    Returns:
        UvcCoefficients
    """
    allowed = set(sens.bus_ids)
    for element in layout.elements():
        if element.bus not in allowed:
            raise InputError(f"element {element.id} placed on unknown or slack bus {element.bus}")
    return UvcCoefficients(
        bus_ids=sens.bus_ids,
        b_gen=_columns(sens, layout.uncertain_gens),
        b_load=_columns(sens, layout.uncertain_loads),
        b_q=_columns(sens, layout.providers, reactive_only=True),
        b_p=_columns(sens, layout.providers, active_only=True),
        b_const_gen=_columns(sens, layout.constant_gens),
        b_const_load=_columns(sens, layout.constant_loads),
        gen_ids=layout.gen_ids,
        load_ids=layout.load_ids,
        provider_ids=layout.provider_ids,
    )


def constant_voltage(coeffs: UvcCoefficients, layout: InjectionLayout, v0: float) -> np.ndarray:
    """
    Per-bus constant component plus fixed provider active power.

    This is the v_o seen by the management problems, which decide only reactive
    dispatch: Σ b_cgen·p − Σ b_cload·p + v0 + Σ b_p·p_j.
    """
    p_cgen = np.array([g.p for g in layout.constant_gens])
    p_cload = np.array([d.p for d in layout.constant_loads])
    p_prov = np.array([j.p for j in layout.providers])
    return (coeffs.b_const_gen @ p_cgen - coeffs.b_const_load @ p_cload
            + coeffs.b_p @ p_prov + v0)
