"""
UVC Voltage Risk - Gaussian Mixtures
Univariate and bivariate Gaussian mixture types with density, CDF and moment evaluation
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy.special import erfc

from ..errors import InputError

WEIGHT_TOLERANCE = 1e-12
BANDWIDTH_FLOOR = 1e-9
SYMMETRY_TOLERANCE = 1e-9
_SQRT2 = math.sqrt(2.0)
_LOG_2PI = math.log(2.0 * math.pi)

ArrayLike = Union[float, np.ndarray]


def _frozen(values, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


def _check_weights(weights: np.ndarray):
    if weights.ndim != 1 or weights.size == 0:
        raise InputError("a mixture needs at least one component")
    if not np.all(np.isfinite(weights)) or np.any(weights <= 0.0):
        raise InputError("mixture weights must be positive")
    if abs(weights.sum() - 1.0) > WEIGHT_TOLERANCE * max(1, weights.size):
        raise InputError(f"mixture weights sum to {weights.sum():.17g}, not 1")


def std_normal_cdf(z: ArrayLike) -> ArrayLike:
    """Φ(z) through the complementary error function."""
    return 0.5 * erfc(-np.asarray(z, dtype=float) / _SQRT2)


def std_normal_sf(z: ArrayLike) -> ArrayLike:
    """1 - Φ(z), accurate in the upper tail."""
    return 0.5 * erfc(np.asarray(z, dtype=float) / _SQRT2)


def std_normal_pdf(z: ArrayLike) -> ArrayLike:
    z = np.asarray(z, dtype=float)
    return np.exp(-0.5 * z * z - 0.5 * _LOG_2PI)


@dataclass(frozen=True)
class Gmm1:
    """Univariate Gaussian mixture (weights, means, variances)."""

    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray

    def __post_init__(self):
        weights = _frozen(self.weights)
        means = _frozen(self.means)
        variances = _frozen(self.variances)
        _check_weights(weights)
        if means.shape != weights.shape or variances.shape != weights.shape:
            raise InputError("weights, means and variances must have the same length")
        if not np.all(np.isfinite(means)):
            raise InputError("component means must be finite")
        if not np.all(np.isfinite(variances)) or np.any(variances <= 0.0):
            raise InputError("component variances must be positive")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "variances", variances)

    @property
    def K(self) -> int:
        return self.weights.size

    @property
    def stds(self) -> np.ndarray:
        return np.sqrt(self.variances)

    def pdf(self, x: ArrayLike) -> ArrayLike:
        return gmm_eval(self, x)[0]

    def cdf(self, x: ArrayLike) -> ArrayLike:
        return gmm_eval(self, x)[1]

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``count`` values; component labels first, then Gaussian offsets."""
        labels = rng.choice(self.K, size=count, p=self.weights)
        return self.means[labels] + self.stds[labels] * rng.standard_normal(count)


@dataclass(frozen=True)
class Gmm2:
    """
    Bivariate Gaussian mixture over (true UVC, predicted UVC).

    ``means`` has shape (K, 2) and ``covs`` shape (K, 2, 2); axis 0 is the
    true component and axis 1 the predicted one.
    """

    weights: np.ndarray
    means: np.ndarray
    covs: np.ndarray

    def __post_init__(self):
        weights = _frozen(self.weights)
        means = _frozen(self.means)
        covs = _frozen(self.covs)
        _check_weights(weights)
        K = weights.size
        if means.shape != (K, 2) or covs.shape != (K, 2, 2):
            raise InputError(f"expected means (K, 2) and covs (K, 2, 2) for K={K}, "
                             f"got {means.shape} and {covs.shape}")
        if not (np.all(np.isfinite(means)) and np.all(np.isfinite(covs))):
            raise InputError("component parameters must be finite")
        scale = np.maximum(np.abs(covs).max(axis=(1, 2)), np.finfo(float).tiny)
        if np.any(np.abs(covs[:, 0, 1] - covs[:, 1, 0]) > SYMMETRY_TOLERANCE * scale):
            raise InputError("component covariances must be symmetric")
        covs = _frozen(0.5 * (covs + np.swapaxes(covs, 1, 2)))
        if np.any(covs[:, 0, 0] <= 0.0) or np.any(determinant(covs) <= 0.0):
            raise InputError("component covariances must be positive definite")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "covs", covs)

    @property
    def K(self) -> int:
        return self.weights.size

    def pdf(self, points) -> np.ndarray:
        """Joint density at an (M, 2) array of points."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        det = determinant(self.covs)
        inv00 = self.covs[:, 1, 1] / det
        inv11 = self.covs[:, 0, 0] / det
        inv01 = -self.covs[:, 0, 1] / det
        d0 = points[:, 0, None] - self.means[None, :, 0]
        d1 = points[:, 1, None] - self.means[None, :, 1]
        quad = inv00 * d0 * d0 + 2.0 * inv01 * d0 * d1 + inv11 * d1 * d1
        dens = np.exp(-0.5 * quad) / (2.0 * math.pi * np.sqrt(det))
        return dens @ self.weights

    def marginal(self, axis: int) -> Gmm1:
        """Univariate marginal of axis 0 (true) or 1 (predicted)."""
        return Gmm1(self.weights, self.means[:, axis], self.covs[:, axis, axis])

    def moments(self) -> Tuple[np.ndarray, np.ndarray]:
        """Mean vector and raw second-moment matrix E[x xᵀ]."""
        mean = self.weights @ self.means
        outer = self.covs + self.means[:, :, None] * self.means[:, None, :]
        return mean, np.tensordot(self.weights, outer, axes=1)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        labels = rng.choice(self.K, size=count, p=self.weights)
        chol = np.linalg.cholesky(self.covs)
        noise = rng.standard_normal((count, 2))
        return self.means[labels] + np.einsum("nij,nj->ni", chol[labels], noise)


def determinant(covs: np.ndarray) -> np.ndarray:
    """Determinants of a stack of 2x2 matrices."""
    return covs[..., 0, 0] * covs[..., 1, 1] - covs[..., 0, 1] * covs[..., 1, 0]


def gmm_eval(g: Gmm1, x: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """
    Mixture density and CDF.

    Args:
        g: Univariate mixture
        x: Point or array of points (pu²)

    Returns:
        Tuple (pdf, cdf) shaped like ``x``
    """
    x = np.asarray(x, dtype=float)
    stds = g.stds
    z = (x[..., None] - g.means) / stds
    pdf = (std_normal_pdf(z) / stds) @ g.weights
    cdf = std_normal_cdf(z) @ g.weights
    if x.ndim == 0:
        return float(pdf), float(cdf)
    return pdf, cdf


def gmm_moments(g: Gmm1) -> Tuple[float, float]:
    """Mixture mean and variance."""
    mean = float(g.weights @ g.means)
    # Centred form of Σ ω(Σ + μ²) - mean², stable for near-point masses
    variance = float(g.weights @ (g.variances + (g.means - mean) ** 2))
    return mean, variance


def negate(g: Gmm1) -> Gmm1:
    """Mixture of -X."""
    return Gmm1(g.weights, -g.means, g.variances)


def point_mass(value: float, variance: Optional[float] = None) -> Gmm1:
    """Single narrow component used for deterministic quantities."""
    return Gmm1(np.ones(1), np.array([value]), np.array([variance or BANDWIDTH_FLOOR ** 2]))
