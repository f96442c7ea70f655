"""
UVC Voltage Risk - Risk Measures
Value-at-risk by safeguarded Newton-Raphson and closed-form CVaR of Gaussian mixtures
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from ..density.gmm import Gmm1, gmm_eval, gmm_moments, negate, std_normal_pdf, std_normal_sf
from ..errors import InputError, NumericError

logger = logging.getLogger(__name__)

CDF_TOLERANCE = 1e-10
MAX_NEWTON_ITERATIONS = 50
BRACKET_STDS = 10.0
MIN_DENSITY = 1e-300
MAX_BISECTIONS = 2000


@dataclass(frozen=True)
class QuantileResult:
    """Outcome of one quantile search."""

    value: float
    iterations: int
    method: str  # "newton" or "bisection"
    residual: float
    bisection_steps: int = 0


def _bracket(g: Gmm1, tau: float, mean: float, std: float):
    width = BRACKET_STDS * max(std, 1e-300)
    lo, hi = mean - width, mean + width
    for _ in range(200):
        if gmm_eval(g, lo)[1] <= tau:
            break
        lo -= width
        width *= 2.0
    width = BRACKET_STDS * max(std, 1e-300)
    for _ in range(200):
        if gmm_eval(g, hi)[1] >= tau:
            break
        hi += width
        width *= 2.0
    return lo, hi


def solve_quantile(g: Gmm1, tau: float) -> QuantileResult:
    """
    Find x with |F(x) - τ| <= 1e-10.

    Newton iterations start at mean + Φ⁻¹(τ)·std inside the bracket
    [mean - 10·std, mean + 10·std], expanded until it contains the root and
    tightened by every iterate. A Newton step that would leave the bracket or
    move more than half as far as the previous step, and any iterate with a
    density below 1e-300, is replaced by a bisection step of the bracket.
    After 50 iterations the search finishes by plain bisection.
    """
    if not 0.0 < tau < 1.0:
        raise InputError(f"confidence level must lie in (0, 1), got {tau}")
    mean, variance = gmm_moments(g)
    std = math.sqrt(variance)
    lo, hi = _bracket(g, tau, mean, std)
    x = min(max(mean + float(ndtri(tau)) * std, lo), hi)
    last_move = hi - lo
    bisections = 0

    for iteration in range(1, MAX_NEWTON_ITERATIONS + 1):
        pdf, cdf = gmm_eval(g, x)
        residual = cdf - tau
        if abs(residual) <= CDF_TOLERANCE:
            return QuantileResult(x, iteration, "newton", residual, bisections)
        if residual < 0.0:
            lo = max(lo, x)
        else:
            hi = min(hi, x)
        step = x - residual / pdf if pdf >= MIN_DENSITY else math.nan
        if not (lo < step < hi) or abs(step - x) > 0.5 * abs(last_move):
            step = 0.5 * (lo + hi)
            bisections += 1
        last_move = step - x
        x = step

    logger.debug("Newton did not converge for tau=%s; bisecting on [%.17g, %.17g]", tau, lo, hi)
    for iteration in range(1, MAX_BISECTIONS + 1):
        mid = 0.5 * (lo + hi)
        residual = gmm_eval(g, mid)[1] - tau
        if abs(residual) <= CDF_TOLERANCE or mid in (lo, hi):
            # Adjacent floats: no representable x gets closer to τ
            return QuantileResult(mid, iteration, "bisection", residual)
        if residual < 0.0:
            lo = mid
        else:
            hi = mid
    raise NumericError(f"quantile search for tau={tau} did not converge "
                       f"(bracket [{lo:.17g}, {hi:.17g}])")


def var_gmm(g: Gmm1, tau: float) -> float:
    """τ-quantile (value-at-risk) of a mixture."""
    return solve_quantile(g, tau).value


def cvar_gmm(g: Gmm1, tau: float) -> float:
    """
    Conditional value-at-risk: mean of the upper tail beyond VaR_τ.

    Uses the component identity ∫_a^∞ x·φ_{μ,σ}(x) dx = μ·[1 - Φ_{μ,σ}(a)] + σ²·φ_{μ,σ}(a).

    Args:
        g: Univariate mixture
        tau: Confidence level in [0, 1)

    Returns:
        CVaR (pu²); the mixture mean when ``tau`` is 0
    """
    if not 0.0 <= tau < 1.0:
        raise InputError(f"confidence level must lie in [0, 1), got {tau}")
    if tau == 0.0:
        return gmm_moments(g)[0]
    threshold = var_gmm(g, tau)
    stds = g.stds
    z = (threshold - g.means) / stds
    tail = g.means * std_normal_sf(z) + g.variances * std_normal_pdf(z) / stds
    return float(g.weights @ tail) / (1.0 - tau)


@dataclass(frozen=True)
class BusRisk:
    """Upper and lower VaR/CVaR of a full bus voltage (pu²)."""

    var_upper: float
    var_lower: float
    cvar_upper: float
    cvar_lower: float

    def shifted(self, delta: float) -> "BusRisk":
        return BusRisk(self.var_upper + delta, self.var_lower + delta,
                       self.cvar_upper + delta, self.cvar_lower + delta)


def uvc_risk(g: Gmm1, tau: float) -> BusRisk:
    """Risk of the UVC itself; the lower side comes from the mixture of -X."""
    flipped = negate(g)
    return BusRisk(var_upper=var_gmm(g, tau), var_lower=-var_gmm(flipped, tau),
                   cvar_upper=cvar_gmm(g, tau), cvar_lower=-cvar_gmm(flipped, tau))


def assess_bus(g: Gmm1, tau: float, v_c: float = 0.0, v_o: float = 0.0) -> BusRisk:
    """
    Voltage risk of a bus: UVC risk translated by the controllable and constant parts.

    Args:
        g: Conditional UVC mixture
        tau: Confidence level
        v_c: Controllable component (pu²)
        v_o: Constant component (pu²)

    Returns:
        BusRisk of the full squared voltage
    """
    if not (np.isfinite(v_c) and np.isfinite(v_o)):
        raise InputError("voltage components must be finite")
    return uvc_risk(g, tau).shifted(v_c + v_o)
