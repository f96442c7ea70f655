"""
UVC Voltage Risk - Network Model
Radial feeder description: buses with voltage limits, branches, slack bus
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

import networkx as nx
import numpy as np

from ..errors import InputError, TopologyError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bus:
    """A bus with voltage-magnitude limits in pu."""

    id: int
    vmin_pu: float
    vmax_pu: float

    def __post_init__(self):
        if not (0.0 < self.vmin_pu < self.vmax_pu):
            raise InputError(f"bus {self.id}: limits must satisfy 0 < vmin < vmax, "
                             f"got {self.vmin_pu}, {self.vmax_pu}")


@dataclass(frozen=True)
class Branch:
    """A line section between two buses; impedance in pu."""

    from_bus: int
    to_bus: int
    r: float
    x: float

    def __post_init__(self):
        if self.from_bus == self.to_bus:
            raise TopologyError(f"branch {self.from_bus}-{self.to_bus} is a self-loop")
        if not math.isfinite(self.r) or self.r < 0.0:
            raise InputError(f"branch {self.from_bus}-{self.to_bus}: r must be finite and >= 0")
        if not math.isfinite(self.x):
            raise InputError(f"branch {self.from_bus}-{self.to_bus}: x must be finite")


@dataclass(frozen=True)
class Network:
    """
    Radial distribution feeder.

    The branch graph must be a spanning tree over all buses. Voltage limits are
    kept as magnitudes; ``v_min``/``v_max`` return them squared (pu²) in the
    non-slack bus order used by every matrix in the package.
    """

    buses: Tuple[Bus, ...]
    slack_bus: int
    v0: float
    branches: Tuple[Branch, ...]

    def __post_init__(self):
        object.__setattr__(self, "buses", tuple(self.buses))
        object.__setattr__(self, "branches", tuple(self.branches))
        if not self.v0 > 0.0:
            raise InputError(f"squared slack voltage must be positive, got {self.v0}")
        ids = [bus.id for bus in self.buses]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate bus ids in bus list")
        if self.slack_bus not in ids:
            raise TopologyError(f"slack bus {self.slack_bus} is not in the bus list")
        known = set(ids)
        for branch in self.branches:
            for end in (branch.from_bus, branch.to_bus):
                if end not in known:
                    raise TopologyError(f"branch {branch.from_bus}-{branch.to_bus} "
                                        f"references unknown bus {end}")
        if len(self.branches) != len(ids) - 1 or not nx.is_tree(self.graph()):
            raise TopologyError("branch graph is not radial and connected "
                                f"({len(ids)} buses, {len(self.branches)} branches)")

    def graph(self) -> nx.Graph:
        """Undirected branch graph with ``r``/``x`` edge attributes."""
        graph = nx.Graph()
        graph.add_nodes_from(bus.id for bus in self.buses)
        for branch in self.branches:
            graph.add_edge(branch.from_bus, branch.to_bus, r=branch.r, x=branch.x)
        return graph

    @property
    def bus_ids(self) -> Tuple[int, ...]:
        """Non-slack bus ids in file order."""
        return tuple(bus.id for bus in self.buses if bus.id != self.slack_bus)

    def _bus_map(self) -> Dict[int, Bus]:
        return {bus.id: bus for bus in self.buses}

    @property
    def v_min(self) -> np.ndarray:
        buses = self._bus_map()
        return np.array([buses[i].vmin_pu ** 2 for i in self.bus_ids])

    @property
    def v_max(self) -> np.ndarray:
        buses = self._bus_map()
        return np.array([buses[i].vmax_pu ** 2 for i in self.bus_ids])

    def slack_paths(self) -> Dict[int, List[int]]:
        """Bus sequence from the slack bus to every bus (slack first)."""
        return nx.single_source_shortest_path(self.graph(), self.slack_bus)
