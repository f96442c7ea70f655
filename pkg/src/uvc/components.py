"""
UVC Voltage Risk - Voltage Components
True/predicted uncertain voltage components and the three-way voltage decomposition
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..errors import InputError, InsufficientDataError
from ..grid.layout import InjectionLayout, UvcCoefficients
from .series import InjectionSeries

logger = logging.getLogger(__name__)


def _check_alpha(alpha: float):
    if not 0.0 <= alpha <= 1.0:
        raise InputError(f"curtailment ratio must lie in [0, 1], got {alpha}")


def _vector(values, size: int, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.shape != (size,):
        raise InputError(f"{name} must have length {size}, got shape {array.shape}")
    return array


def uvc_values(b_gen_row, b_load_row, chi, zeta, alpha: float = 0.0) -> np.ndarray:
    """
    Uncertain voltage component for each record: (1-α)·χ·b_gen - ζ·b_load.

    Args:
        b_gen_row: Generator coefficients of one bus
        b_load_row: Load coefficients of one bus
        chi: Generator outputs, records by generators
        zeta: Load demands, records by loads
        alpha: Curtailment ratio

    Returns:
        One value per record (pu²)
    """
    chi = np.atleast_2d(np.asarray(chi, dtype=float))
    zeta = np.atleast_2d(np.asarray(zeta, dtype=float))
    return (1.0 - alpha) * (chi @ np.asarray(b_gen_row)) - zeta @ np.asarray(b_load_row)


@dataclass(frozen=True)
class UvcSampleSet:
    """Paired true/predicted UVC samples of one bus at one hour of day."""

    bus: int
    hour: int
    true: np.ndarray
    pred: np.ndarray

    def __post_init__(self):
        true = np.array(self.true, dtype=float).ravel()
        pred = np.array(self.pred, dtype=float).ravel()
        if true.size != pred.size:
            raise InputError("true and predicted samples must be paired")
        if true.size < 2:
            raise InsufficientDataError(f"bus {self.bus} hour {self.hour}: need at least 2 samples, "
                                        f"got {true.size}")
        if not (np.all(np.isfinite(true)) and np.all(np.isfinite(pred))):
            raise InputError(f"bus {self.bus} hour {self.hour}: samples must be finite")
        true.setflags(write=False)
        pred.setflags(write=False)
        object.__setattr__(self, "true", true)
        object.__setattr__(self, "pred", pred)

    def __len__(self) -> int:
        return self.true.size

    @property
    def degenerate(self) -> bool:
        """Both columns have zero spread."""
        return bool(np.ptp(self.true) == 0.0 and np.ptp(self.pred) == 0.0)


def compute_uvc_samples(coeffs: UvcCoefficients, hist: InjectionSeries, bus: int, hour: int,
                        alpha: float = 0.0) -> UvcSampleSet:
    """
    Build true and predicted UVC samples from the records at ``hour``.

    Args:
        coeffs: UVC coefficients
        hist: Historical injections
        bus: Bus id
        hour: Hour of day (0-23)
        alpha: Curtailment ratio applied to every generator

    Returns:
        UvcSampleSet with one pair per historical day
    """
    _check_alpha(alpha)
    row = coeffs.row(bus)
    at_hour = hist.at_hour(hour)
    if len(at_hour) < 2:
        raise InsufficientDataError(f"bus {bus} hour {hour}: {len(at_hour)} records at this hour")
    true = uvc_values(coeffs.b_gen[row], coeffs.b_load[row], at_hour.gen_true, at_hour.load_true,
                      alpha)
    pred = uvc_values(coeffs.b_gen[row], coeffs.b_load[row], at_hour.gen_pred, at_hour.load_pred,
                      alpha)
    return UvcSampleSet(bus=bus, hour=hour, true=true, pred=pred)


def predict_uvc(coeffs: UvcCoefficients, chi_pred, zeta_pred, bus: int,
                alpha: float = 0.0) -> float:
    """Predicted UVC of a bus: (1-α)·Σ b_gen·χ̃ - Σ b_load·ζ̃."""
    _check_alpha(alpha)
    row = coeffs.row(bus)
    chi_pred = _vector(chi_pred, coeffs.b_gen.shape[1], "generator predictions")
    zeta_pred = _vector(zeta_pred, coeffs.b_load.shape[1], "load predictions")
    return float((1.0 - alpha) * (coeffs.b_gen[row] @ chi_pred) - coeffs.b_load[row] @ zeta_pred)


@dataclass(frozen=True)
class VoltageDecomposition:
    """Uncertain, controllable and constant parts of a squared voltage (pu²)."""

    v_r: float
    v_c: float
    v_o: float

    @property
    def total(self) -> float:
        return self.v_r + self.v_c + self.v_o


def assemble_injections(layout: InjectionLayout, bus_ids: Sequence[int], chi, zeta, q,
                        alpha: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Net nodal injections (P, Q) of every element, in ``bus_ids`` order.

    Curtailment scales both the active output of each uncertain generator and
    its κ-proportional reactive output.
    """
    _check_alpha(alpha)
    chi = _vector(chi, len(layout.uncertain_gens), "generator outputs")
    zeta = _vector(zeta, len(layout.uncertain_loads), "load demands")
    q = _vector(q, len(layout.providers), "provider dispatch")
    position = {bus: k for k, bus in enumerate(bus_ids)}
    P = np.zeros(len(bus_ids))
    Q = np.zeros(len(bus_ids))

    def inject(bus, p, kappa=0.0, reactive=None):
        k = position[bus]
        P[k] += p
        Q[k] += kappa * p if reactive is None else reactive

    for gen, value in zip(layout.uncertain_gens, chi):
        inject(gen.bus, (1.0 - alpha) * value, gen.kappa)
    for load, value in zip(layout.uncertain_loads, zeta):
        inject(load.bus, -value, load.kappa)
    for gen in layout.constant_gens:
        inject(gen.bus, gen.p, gen.kappa)
    for load in layout.constant_loads:
        inject(load.bus, -load.p, load.kappa)
    for provider, value in zip(layout.providers, q):
        inject(provider.bus, provider.p, reactive=value)
    return P, Q


def decompose_voltage(coeffs: UvcCoefficients, layout: InjectionLayout, chi, zeta, q, v0: float,
                      bus: int, alpha: float = 0.0) -> VoltageDecomposition:
    """
    Split the squared voltage of one bus into uncertain, controllable and constant parts.

    Args:
        coeffs: UVC coefficients built from ``layout``
        layout: Injection layout
        chi: Generator outputs (pu)
        zeta: Load demands (pu)
        q: Provider reactive dispatch (pu)
        v0: Squared slack voltage (pu²)
        bus: Bus id
        alpha: Curtailment ratio

    Returns:
        VoltageDecomposition whose total equals the linear-model voltage
    """
    _check_alpha(alpha)
    row = coeffs.row(bus)
    chi = _vector(chi, coeffs.b_gen.shape[1], "generator outputs")
    zeta = _vector(zeta, coeffs.b_load.shape[1], "load demands")
    q = _vector(q, coeffs.b_q.shape[1], "provider dispatch")
    p_prov = np.array([j.p for j in layout.providers])
    p_cgen = np.array([g.p for g in layout.constant_gens])
    p_cload = np.array([d.p for d in layout.constant_loads])
    v_r = (1.0 - alpha) * (coeffs.b_gen[row] @ chi) - coeffs.b_load[row] @ zeta
    v_c = coeffs.b_q[row] @ q + coeffs.b_p[row] @ p_prov
    v_o = coeffs.b_const_gen[row] @ p_cgen - coeffs.b_const_load[row] @ p_cload + v0
    return VoltageDecomposition(v_r=float(v_r), v_c=float(v_c), v_o=float(v_o))
