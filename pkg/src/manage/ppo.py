"""
UVC Voltage Risk - Gaussian PPO Baseline
Joint Gaussian injection forecast and the mean/standard-deviation risk constraints built on it
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Tuple, Union

import numpy as np
from scipy.special import ndtri

from ..density.gmm import std_normal_pdf
from ..errors import InputError, InsufficientDataError
from ..grid.layout import UvcCoefficients
from ..risk.profile import RiskProfile
from ..solver.problem import LpProblem, MilpProblem
from ..uvc.series import InjectionSeries
from .builders import build_curtailment_milp, build_risk_lp
from .spec import ManagementSpec, PwlRiskTable, RiskVariant

logger = logging.getLogger(__name__)

PSD_TOLERANCE = 1e-12


@dataclass(frozen=True)
class GaussianInjectionModel:
    """
    Joint Gaussian forecast of (χ, ζ): generator block first, then loads.

    ``mean`` holds the point predictions; ``cov`` is the joint error covariance.
    """

    mean_gen: np.ndarray
    mean_load: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean_gen = np.array(self.mean_gen, dtype=float).ravel()
        mean_load = np.array(self.mean_load, dtype=float).ravel()
        size = mean_gen.size + mean_load.size
        cov = np.array(self.cov, dtype=float).reshape(size, size)
        if not np.all(np.isfinite(cov)):
            raise InputError("covariance must be finite")
        scale = max(1.0, float(np.max(np.abs(cov), initial=0.0)))
        if np.max(np.abs(cov - cov.T), initial=0.0) > PSD_TOLERANCE * scale:
            raise InputError("covariance must be symmetric")
        if size and float(np.linalg.eigvalsh(cov).min()) < -PSD_TOLERANCE * scale:
            raise InputError("covariance must be positive semidefinite")
        for name, value in (("mean_gen", mean_gen), ("mean_load", mean_load), ("cov", cov)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def G(self) -> int:
        return self.mean_gen.size

    @property
    def cov_gen(self) -> np.ndarray:
        return self.cov[:self.G, :self.G]

    @property
    def cov_load(self) -> np.ndarray:
        return self.cov[self.G:, self.G:]

    @property
    def cov_cross(self) -> np.ndarray:
        """Generator-by-load block Σχζ."""
        return self.cov[:self.G, self.G:]


def fit_gaussian_injections(history: InjectionSeries, hour: int, chi_pred,
                            zeta_pred) -> GaussianInjectionModel:
    """
    Gaussian forecast centred on the point predictions.

    The covariance is the sample covariance of historical prediction errors
    (true minus predicted) at the same hour of day.

    Args:
        history: Training injections
        hour: Hour of day
        chi_pred: Generator predictions (pu)
        zeta_pred: Load predictions (pu)

    Returns:
        GaussianInjectionModel
    """
    at_hour = history.at_hour(hour)
    if len(at_hour) < 2:
        raise InsufficientDataError(f"hour {hour}: need at least 2 records for a covariance, "
                                    f"got {len(at_hour)}")
    errors = np.hstack([at_hour.gen_true - at_hour.gen_pred, at_hour.load_true - at_hour.load_pred])
    size = errors.shape[1]
    cov = np.cov(errors, rowvar=False, ddof=1).reshape(size, size) if size else np.zeros((0, 0))
    return GaussianInjectionModel(chi_pred, zeta_pred, 0.5 * (cov + cov.T))


def gaussian_uvc_moments(model: GaussianInjectionModel, b_gen_row, b_load_row,
                         alpha: float = 0.0) -> Tuple[float, float]:
    """
    Mean and variance of (1-α)·b_genᵀχ - b_loadᵀζ under the Gaussian model.

    D = (1-α)²·b_genᵀΣχ·b_gen + b_loadᵀΣζ·b_load - 2(1-α)·b_genᵀΣχζ·b_load
    """
    b_gen = np.asarray(b_gen_row, dtype=float)
    b_load = np.asarray(b_load_row, dtype=float)
    scale = 1.0 - alpha
    mean = scale * float(b_gen @ model.mean_gen) - float(b_load @ model.mean_load)
    variance = (scale * scale * float(b_gen @ model.cov_gen @ b_gen)
                + float(b_load @ model.cov_load @ b_load)
                - 2.0 * scale * float(b_gen @ model.cov_cross @ b_load))
    return mean, max(variance, 0.0)


def gaussian_risk(mean: float, variance: float, tau: float) -> Tuple[float, float, float, float]:
    """(VaR_up, VaR_lo, CVaR_up, CVaR_lo) of N(mean, variance)."""
    z = float(ndtri(tau))
    std = math.sqrt(variance)
    tail = std * float(std_normal_pdf(z)) / (1.0 - tau)
    return mean + z * std, mean - z * std, mean + tail, mean - tail


def ppo_risk_profiles(model: GaussianInjectionModel, coeffs: UvcCoefficients, tau: float,
                      hour: int = 0, alpha: float = 0.0) -> Dict[int, RiskProfile]:
    """Gaussian VaR/CVaR of the uncertain component at every bus."""
    profiles = {}
    for k, bus in enumerate(coeffs.bus_ids):
        mean, variance = gaussian_uvc_moments(model, coeffs.b_gen[k], coeffs.b_load[k], alpha)
        var_up, var_lo, cvar_up, cvar_lo = gaussian_risk(mean, variance, tau)
        profiles[bus] = RiskProfile(bus, hour, tau, var_up, var_lo, cvar_up, cvar_lo)
    return profiles


def ppo_pwl_tables(model: GaussianInjectionModel, coeffs: UvcCoefficients,
                   spec: ManagementSpec) -> Dict[int, PwlRiskTable]:
    """Gaussian risk on the curtailment grid; only the √D term is nonlinear in α."""
    cvar = spec.variant is RiskVariant.CVAR
    columns = [ppo_risk_profiles(model, coeffs, spec.tau, spec.hour, a) for a in spec.alphas]
    tables = {}
    for bus in spec.bus_ids:
        if cvar:
            beta = [c[bus].cvar_upper for c in columns]
            gamma = [-c[bus].cvar_lower for c in columns]
        else:
            beta = [c[bus].var_upper for c in columns]
            gamma = [-c[bus].var_lower for c in columns]
        tables[bus] = PwlRiskTable(bus, spec.alphas, beta, gamma)
    return tables


def build_ppo_baseline(model: GaussianInjectionModel, coeffs: UvcCoefficients,
                       spec: ManagementSpec) -> Union[LpProblem, MilpProblem]:
    """
    Dispatch problem of the Gaussian baseline.

    Without curtailment the Gaussian bounds are constants, giving an LP. With
    curtailment the bounds are tabulated over the α grid and embedded in the
    same SOS2 MILP as the mixture-based problem.
    """
    if model.G != coeffs.b_gen.shape[1] or model.mean_load.size != coeffs.b_load.shape[1]:
        raise InputError("Gaussian model dimensions do not match the layout")
    if spec.curtailment:
        return build_curtailment_milp(spec, ppo_pwl_tables(model, coeffs, spec),
                                      name=f"ppo_{spec.variant.value}_milp_h{spec.hour:02d}")
    profiles = ppo_risk_profiles(model, coeffs, spec.tau, spec.hour)
    cvar = spec.variant is RiskVariant.CVAR
    upper = np.array([profiles[b].cvar_upper if cvar else profiles[b].var_upper
                      for b in spec.bus_ids])
    lower = np.array([profiles[b].cvar_lower if cvar else profiles[b].var_lower
                      for b in spec.bus_ids])
    return build_risk_lp(spec, upper, lower, name=f"ppo_{spec.variant.value}_lp_h{spec.hour:02d}")
