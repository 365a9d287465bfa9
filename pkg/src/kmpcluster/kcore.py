"""Core decomposition and the iterative top-core clustering loop.

The core label (coreness) of a node is the largest k such that the node
survives repeated deletion of all nodes with fewer than k remaining
neighbors. Labels here are always computed within an induced subgraph,
which for the iterative loop shrinks as top cores are carved off.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .clustering import Cluster, Clustering, all_core
from .graph import Network, connected_components
from .parsing import has_positive_modularity

log = logging.getLogger(__name__)


@dataclass
class CoreLabeling:
    """Core labels for the members of one induced subgraph."""

    nodes: np.ndarray
    labels: np.ndarray

    @property
    def max_label(self) -> int:
        return int(self.labels.max()) if len(self.labels) else 0

    def at_least(self, k: int) -> np.ndarray:
        """Members with label >= k, sorted."""
        return self.nodes[self.labels >= k]


def core_labels(net: Network, within=None) -> CoreLabeling:
    """Core label of every node of the induced subgraph (whole network
    when `within` is None)."""
    s = net.all_nodes() if within is None else net.subset(within)
    if len(s) == 0:
        return CoreLabeling(s, np.empty(0, dtype=np.int64))
    labels = _kernels.peel(net.indptr, net.indices, s, net.n)
    return CoreLabeling(s, labels)


def degeneracy(net: Network) -> int:
    """Largest k for which the network has a nonempty k-core."""
    return core_labels(net).max_label


def kcore_clusters(net: Network, k: int) -> Clustering:
    """Connected components of the k-core, one all-core cluster each.

    No quality screening happens here; use `ikc` or the parsing helpers
    for that. k=0 would put every node in one bag per component, which
    callers never actually want, so it is bumped to 1 with a warning.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        log.warning("k=0 requested; using k=1 instead")
        k = 1
    lab = core_labels(net)
    members = lab.at_least(k)
    comps = connected_components(net, members)
    return Clustering([all_core(c) for c in comps], net.n)


def ikc(net: Network, k: int) -> Clustering:
    """Iteratively carve off top cores until the residual thins below k.

    Each round labels the residual subgraph, takes the connected
    components of the highest-label core, keeps those with positive
    modularity (measured against the full network), and deletes every
    top-core node from the residual regardless of whether its component
    was kept. Deleted-but-rejected nodes simply end up unclustered.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    alive = net.all_nodes()
    kept: list[Cluster] = []
    while len(alive):
        lab = core_labels(net, alive)
        top = lab.max_label
        if top < k:
            break
        members = lab.at_least(top)
        for comp in connected_components(net, members):
            if has_positive_modularity(net, comp):
                kept.append(all_core(comp))
        alive = np.setdiff1d(alive, members, assume_unique=True)
    return Clustering(kept, net.n)
