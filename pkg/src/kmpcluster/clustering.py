"""Clusters with a core/non-core split, and collections of them.

Core members are the nodes a cluster is structurally built on; non-core
members are attached to a core without having to satisfy the core degree
requirement. Both parts are kept as sorted unique int64 arrays and must
never overlap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_EMPTY = np.empty(0, dtype=np.int64)


def as_ids(nodes) -> np.ndarray:
    a = np.unique(np.asarray(nodes, dtype=np.int64).ravel())
    return a if len(a) else _EMPTY


@dataclass(eq=False)
class Cluster:
    core: np.ndarray
    noncore: np.ndarray = field(default_factory=lambda: _EMPTY)

    def __post_init__(self):
        self.core = as_ids(self.core)
        self.noncore = as_ids(self.noncore)
        if len(np.intersect1d(self.core, self.noncore)):
            raise ValueError("core and non-core overlap")

    @property
    def nodes(self) -> np.ndarray:
        """All members, sorted."""
        if not len(self.noncore):
            return self.core
        return np.union1d(self.core, self.noncore)

    @property
    def size(self) -> int:
        return len(self.core) + len(self.noncore)

    @property
    def min_id(self) -> int:
        """Smallest member id; sorts clusters into canonical order."""
        lo = None
        if len(self.core):
            lo = int(self.core[0])
        if len(self.noncore) and (lo is None or self.noncore[0] < lo):
            lo = int(self.noncore[0])
        if lo is None:
            raise ValueError("empty cluster has no smallest member")
        return lo

    def same_nodes(self, other: "Cluster") -> bool:
        return (
            np.array_equal(self.core, other.core)
            and np.array_equal(self.noncore, other.noncore)
        )


def all_core(nodes) -> Cluster:
    return Cluster(core=as_ids(nodes))


@dataclass(eq=False)
class Clustering:
    """A set of disjoint clusters over a network of `n_nodes` nodes.

    Clusters are held in canonical order: ascending by smallest member
    id. Nodes absent from every cluster are unclustered; they are not
    represented explicitly.
    """

    clusters: list[Cluster]
    n_nodes: int

    def __post_init__(self):
        self.clusters = sorted(
            (c for c in self.clusters if c.size > 0), key=lambda c: c.min_id
        )

    def __len__(self) -> int:
        return len(self.clusters)

    def __iter__(self):
        return iter(self.clusters)

    def non_singletons(self) -> list[Cluster]:
        return [c for c in self.clusters if c.size >= 2]

    def member_mask(self, min_size: int = 1) -> np.ndarray:
        """uint8 mask of nodes covered by clusters of at least `min_size`."""
        m = np.zeros(self.n_nodes, dtype=np.uint8)
        for c in self.clusters:
            if c.size >= min_size:
                m[c.core] = 1
                m[c.noncore] = 1
        return m

    def unclustered(self) -> np.ndarray:
        """Nodes in no cluster at all, sorted."""
        return np.flatnonzero(self.member_mask() == 0).astype(np.int64)

    def assignment(self, min_size: int = 1) -> np.ndarray:
        """Cluster index per node (-1 if unassigned or below `min_size`)."""
        out = np.full(self.n_nodes, -1, dtype=np.int64)
        for i, c in enumerate(self.clusters):
            if c.size >= min_size:
                out[c.core] = i
                out[c.noncore] = i
        return out

    def check_disjoint(self) -> None:
        """Raise if any node appears in two clusters."""
        counts = np.zeros(self.n_nodes, dtype=np.int64)
        for c in self.clusters:
            counts[c.core] += 1
            counts[c.noncore] += 1
        bad = np.flatnonzero(counts > 1)
        if len(bad):
            raise ValueError(
                f"{len(bad)} nodes appear in more than one cluster "
                f"(first few: {bad[:5].tolist()})"
            )

    def same_clusters(self, other: "Clustering") -> bool:
        return (
            self.n_nodes == other.n_nodes
            and len(self.clusters) == len(other.clusters)
            and all(a.same_nodes(b) for a, b in zip(self.clusters, other.clusters))
        )
