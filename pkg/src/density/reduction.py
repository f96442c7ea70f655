"""
UVC Voltage Risk - Mixture Reduction
Greedy moment-preserving pairwise merging of bivariate Gaussian mixtures
"""

import logging
from typing import Tuple

import numpy as np

from ..errors import InputError
from .gmm import Gmm2, determinant

logger = logging.getLogger(__name__)

DEFAULT_COMPONENTS = 10


def merge_moments(w1, m1, c1, w2, m2, c2) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Moment-matched merge of component pairs (broadcast over leading axes).

    Returns:
        Tuple (weight, mean, covariance) of the merged components
    """
    w = w1 + w2
    a = w1 / w
    b = w2 / w
    mean = a[..., None] * m1 + b[..., None] * m2
    d = m1 - m2
    cov = (a[..., None, None] * c1 + b[..., None, None] * c2
           + (a * b)[..., None, None] * d[..., :, None] * d[..., None, :])
    cov = 0.5 * (cov + np.swapaxes(cov, -1, -2))
    return w, mean, cov


class _PairwiseMerger:
    """Mutable working state of one reduction run."""

    def __init__(self, g: Gmm2):
        self.w = g.weights.copy()
        self.mu = g.means.copy()
        self.cov = g.covs.copy()
        self.logdet = np.log(determinant(self.cov))
        K = g.K
        self.active = np.ones(K, dtype=bool)
        self.cost = np.full((K, K), np.inf)
        self.row_min = np.full(K, np.inf)
        self.row_arg = np.full(K, -1, dtype=int)
        for i in range(K - 1):
            others = np.arange(i + 1, K)
            self.cost[i, others] = self.merge_cost(i, others)
        for i in range(K):
            self.refresh(i)

    def merge_cost(self, i: int, others: np.ndarray) -> np.ndarray:
        """Upper bound on the KL divergence caused by merging ``i`` with each of ``others``."""
        w, _, cov = merge_moments(self.w[i], self.mu[i], self.cov[i],
                                  self.w[others], self.mu[others], self.cov[others])
        return 0.5 * (w * np.log(determinant(cov)) - self.w[i] * self.logdet[i]
                      - self.w[others] * self.logdet[others])

    def refresh(self, i: int):
        row = self.cost[i]
        j = int(np.argmin(row))
        self.row_min[i] = row[j]
        self.row_arg[i] = j if np.isfinite(row[j]) else -1

    def step(self):
        # Row minima pick the lowest row, np.argmin the lowest column: lexicographic ties
        i = int(np.argmin(self.row_min))
        j = int(self.row_arg[i])
        w, mu, cov = merge_moments(self.w[i], self.mu[i], self.cov[i],
                                   self.w[j], self.mu[j], self.cov[j])
        self.w[i], self.mu[i], self.cov[i] = w, mu, cov
        self.logdet[i] = np.log(determinant(cov))
        self.active[j] = False
        self.cost[j, :] = np.inf
        self.cost[:, j] = np.inf
        self.row_min[j] = np.inf
        self.row_arg[j] = -1

        later = np.flatnonzero(self.active[i + 1:]) + i + 1
        self.cost[i, later] = self.merge_cost(i, later)
        earlier = np.flatnonzero(self.active[:i])
        if earlier.size:
            self.cost[earlier, i] = self.merge_cost(i, earlier)
        self.refresh(i)

        rows = np.flatnonzero(self.active)
        rows = rows[rows != i]
        stale = np.isin(self.row_arg[rows], (i, j))
        for k in rows[stale]:
            self.refresh(int(k))
        fresh = rows[~stale & (rows < i)]
        candidate = self.cost[fresh, i]
        better = (candidate < self.row_min[fresh]) | (
            (candidate == self.row_min[fresh]) & (i < self.row_arg[fresh]))
        self.row_min[fresh[better]] = candidate[better]
        self.row_arg[fresh[better]] = i

    def result(self) -> Gmm2:
        keep = self.active
        return Gmm2(weights=self.w[keep], means=self.mu[keep], covs=self.cov[keep])


def reduce_gmm(g: Gmm2, K_target: int = DEFAULT_COMPONENTS) -> Gmm2:
    """
    Reduce a mixture to ``K_target`` components by greedy pairwise merging.

    Each step merges the pair whose moment-matched merge has the smallest
    KL upper bound 0.5·[(w_i+w_j)·log|Σ_ij| - w_i·log|Σ_i| - w_j·log|Σ_j|].
    Total weight, mean and second moments are preserved exactly by every merge.

    Args:
        g: Mixture to reduce
        K_target: Number of components to keep

    Returns:
        Reduced mixture, components in original index order
    """
    if not 1 <= K_target <= g.K:
        raise InputError(f"reduction target must lie in [1, {g.K}], got {K_target}")
    if K_target == g.K:
        return g
    merger = _PairwiseMerger(g)
    for _ in range(g.K - K_target):
        merger.step()
    logger.debug("Reduced mixture from %d to %d components", g.K, K_target)
    return merger.result()
