"""
UVC Voltage Risk - Kernel Density Estimation
Gaussian-kernel KDE of paired (true, predicted) UVC samples with Silverman bandwidths
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientDataError
from ..uvc.components import UvcSampleSet
from .gmm import BANDWIDTH_FLOOR, Gmm2

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bandwidths:
    """Per-axis kernel standard deviations (pu²)."""

    h: float
    h_pred: float

    def __post_init__(self):
        if not (self.h > 0.0 and self.h_pred > 0.0):
            raise ValueError("bandwidths must be positive")


def silverman_bandwidth(samples) -> float:
    """
    Silverman's rule of thumb: 0.9·min(σ, IQR/1.34)·N^(-1/5), floored at 1e-9.

    Args:
        samples: One-dimensional sample values

    Returns:
        Kernel bandwidth
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 2:
        raise InsufficientDataError(f"bandwidth selection needs at least 2 samples, got {x.size}")
    sigma = np.std(x, ddof=1)
    q75, q25 = np.percentile(x, [75, 25])
    h = 0.9 * min(sigma, (q75 - q25) / 1.34) * x.size ** -0.2
    return float(max(h, BANDWIDTH_FLOOR))


def kde_bandwidths(samples: UvcSampleSet) -> Bandwidths:
    return Bandwidths(h=silverman_bandwidth(samples.true), h_pred=silverman_bandwidth(samples.pred))


def fit_kde(samples: UvcSampleSet) -> Gmm2:
    """
    KDE as a mixture: one equally weighted kernel per sample pair.

    Each kernel covariance is diag(h², h̃²) so the kernel standard deviations
    equal the Silverman bandwidths.
    """
    bandwidths = kde_bandwidths(samples)
    N = len(samples)
    means = np.column_stack([samples.true, samples.pred])
    cov = np.diag([bandwidths.h ** 2, bandwidths.h_pred ** 2])
    logger.debug("KDE for bus %s hour %s: N=%d, h=%.3g, h_pred=%.3g",
                 samples.bus, samples.hour, N, bandwidths.h, bandwidths.h_pred)
    return Gmm2(weights=np.full(N, 1.0 / N), means=means, covs=np.repeat(cov[None], N, axis=0))
