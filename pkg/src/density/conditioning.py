"""
UVC Voltage Risk - Conditioning
Conditional distribution of the true UVC given its day-ahead prediction
"""

import logging
import math

import numpy as np

from ..errors import DegenerateConditioningError, InputError
from .gmm import BANDWIDTH_FLOOR, Gmm1, Gmm2

logger = logging.getLogger(__name__)

_LOG_2PI = math.log(2.0 * math.pi)


def condition(g: Gmm2, v_pred: float) -> Gmm1:
    """
    Condition a bivariate mixture on the predicted axis.

    Component k becomes N(μ1 + Σ12/Σ22·(ṽ-μ2), Σ11 - Σ12²/Σ22) and its weight is
    rescaled by the marginal likelihood N(ṽ; μ2, Σ22), computed in log space.
    Components whose weight underflows to zero are dropped.

    Args:
        g: Joint (true, predicted) mixture
        v_pred: Predicted UVC (pu²)

    Returns:
        Conditional mixture of the true UVC
    """
    if not math.isfinite(v_pred):
        raise InputError(f"conditioning value must be finite, got {v_pred}")
    s11 = g.covs[:, 0, 0]
    s12 = g.covs[:, 0, 1]
    s22 = g.covs[:, 1, 1]
    offset = v_pred - g.means[:, 1]
    gain = s12 / s22
    means = g.means[:, 0] + gain * offset
    variances = np.maximum(s11 - gain * s12, BANDWIDTH_FLOOR ** 2)

    with np.errstate(divide="ignore"):
        log_w = np.log(g.weights) - 0.5 * (_LOG_2PI + np.log(s22)) - 0.5 * offset * offset / s22
    finite = np.isfinite(log_w)
    if not np.any(finite):
        raise DegenerateConditioningError(
            f"prediction {v_pred:.6g} has non-finite likelihood under every component")
    scaled = np.where(finite, np.exp(log_w - np.max(log_w[finite])), 0.0)
    weights = scaled / scaled.sum()
    keep = weights > 0.0
    if not np.all(keep):
        logger.debug("Conditioning dropped %d negligible components", int((~keep).sum()))
        weights = weights[keep] / weights[keep].sum()
    return Gmm1(weights=weights, means=means[keep], variances=variances[keep])
