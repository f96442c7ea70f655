"""
UVC Voltage Risk - Voltage Sensitivities
Linear DistFlow sensitivities of squared voltage to nodal injections
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..errors import InputError, TopologyError
from .network import Network

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SensitivityMatrices:
    """
    Active (R) and reactive (X) sensitivity matrices in pu²/pu.

    Row and column ``k`` refer to ``bus_ids[k]``; the slack bus is excluded.
    """

    R: np.ndarray
    X: np.ndarray
    bus_ids: Tuple[int, ...]

    def __post_init__(self):
        for name in ("R", "X"):
            matrix = np.array(getattr(self, name), dtype=float)
            matrix.setflags(write=False)
            object.__setattr__(self, name, matrix)
        object.__setattr__(self, "bus_ids", tuple(self.bus_ids))

    def index(self, bus: int) -> int:
        """Position of a bus in the matrix order."""
        try:
            return self.bus_ids.index(bus)
        except ValueError:
            raise InputError(f"bus {bus} is unknown or is the slack bus") from None

    @property
    def size(self) -> int:
        return len(self.bus_ids)


def compute_sensitivities(net: Network) -> SensitivityMatrices:
    """
    Compute R and X by path accumulation over the slack-rooted tree.

    R[i][l] is twice the resistance accumulated from the slack bus down to the
    deepest bus shared by the slack->i and slack->l paths; X likewise.

    Args:
        net: Radial network

    Returns:
        SensitivityMatrices in ``net.bus_ids`` order
    """
    graph = net.graph()
    paths = net.slack_paths()
    r_cum: Dict[int, float] = {net.slack_bus: 0.0}
    x_cum: Dict[int, float] = {net.slack_bus: 0.0}
    # Shortest paths from one source share prefixes, so parents are visited first
    for bus, path in sorted(paths.items(), key=lambda item: len(item[1])):
        if bus == net.slack_bus:
            continue
        parent = path[-2]
        edge = graph.edges[parent, bus]
        r_cum[bus] = r_cum[parent] + edge["r"]
        x_cum[bus] = x_cum[parent] + edge["x"]

    bus_ids = net.bus_ids
    n = len(bus_ids)
    R = np.zeros((n, n))
    X = np.zeros((n, n))
    for a, bus_a in enumerate(bus_ids):
        path_a = paths[bus_a]
        for b in range(a, n):
            path_b = paths[bus_ids[b]]
            shared = net.slack_bus
            for node_a, node_b in zip(path_a, path_b):
                if node_a != node_b:
                    break
                shared = node_a
            R[a, b] = R[b, a] = 2.0 * r_cum[shared]
            X[a, b] = X[b, a] = 2.0 * x_cum[shared]

    logger.debug("Computed sensitivities for %d buses", n)
    return SensitivityMatrices(R=R, X=X, bus_ids=bus_ids)


def sensitivities_from_incidence(net: Network) -> SensitivityMatrices:
    """
    Compute R = 2·F·D_r·Fᵀ and X = 2·F·D_x·Fᵀ from the reduced incidence matrix.

    Branches are oriented away from the slack bus and F is the inverse
    of the branch-by-bus incidence matrix (slack column removed).
    Used as an independent cross-check of ``compute_sensitivities``.
    """
    paths = net.slack_paths()
    bus_ids = net.bus_ids
    column = {bus: k for k, bus in enumerate(bus_ids)}
    n = len(bus_ids)
    incidence = np.zeros((n, n))
    r = np.zeros(n)
    x = np.zeros(n)
    for row, branch in enumerate(net.branches):
        if len(paths[branch.to_bus]) > len(paths[branch.from_bus]):
            parent, child = branch.from_bus, branch.to_bus
        else:
            parent, child = branch.to_bus, branch.from_bus
        incidence[row, column[child]] = 1.0
        if parent != net.slack_bus:
            incidence[row, column[parent]] = -1.0
        r[row] = branch.r
        x[row] = branch.x
    try:
        F = np.linalg.inv(incidence)
    except np.linalg.LinAlgError as exc:
        raise TopologyError("reduced incidence matrix is singular") from exc
    return SensitivityMatrices(R=2.0 * F @ np.diag(r) @ F.T,
                               X=2.0 * F @ np.diag(x) @ F.T,
                               bus_ids=bus_ids)


def voltage_from_injections(sens: SensitivityMatrices, P, Q, v0: float) -> np.ndarray:
    """
    Squared voltages from nodal injections: v = R·P + X·Q + v0.

    Args:
        sens: Sensitivity matrices
        P: Active injections per bus (pu), in ``sens.bus_ids`` order
        Q: Reactive injections per bus (pu)
        v0: Squared slack voltage (pu²)

    Returns:
        Squared voltage per bus (pu²)
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if P.shape != (sens.size,) or Q.shape != (sens.size,):
        raise InputError(f"injection vectors must have length {sens.size}, "
                         f"got {P.shape} and {Q.shape}")
    return sens.R @ P + sens.X @ Q + v0
