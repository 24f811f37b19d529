from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import numpy as np

from ..graph import Graph, connected_components


class ClusteringError(ValueError):
    pass


class CapacityError(RuntimeError):
    """The input is larger than the configured dense-solver limit."""


@dataclass(frozen=True, eq=False)
class Clustering:
    """A partition of ``0..n-1``; ``labels[v]`` is the cluster of ``v``.

    Labels are dense (``0..cluster_count-1``) and every cluster is nonempty.
    Use :meth:`from_labels` to normalise arbitrary label vectors.
    """

    labels: np.ndarray

    def __post_init__(self):
        lab = np.asarray(self.labels)
        if lab.ndim != 1 or (lab.size and not np.issubdtype(lab.dtype, np.integer)):
            raise ClusteringError("labels must be a 1-d integer array")
        lab = lab.astype(np.int64)
        if lab.size:
            if lab.min() < 0:
                raise ClusteringError("negative cluster label")
            present = np.bincount(lab)
            if (present == 0).any():
                raise ClusteringError("cluster labels are not dense")
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @classmethod
    def from_labels(cls, labels) -> "Clustering":
        """Relabel to ``0..c-1`` in order of first appearance."""
        labels = np.asarray(labels)
        if labels.size == 0:
            return cls(np.empty(0, dtype=np.int64))
        _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
        rank = np.empty(len(first), dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(len(first))
        return cls(rank[inv.ravel()])

    @property
    def cluster_count(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def __len__(self) -> int:
        return len(self.labels)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.cluster_count)

    def clusters(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        cuts = np.cumsum(self.sizes())[:-1]
        return np.split(order, cuts)

    def __eq__(self, other) -> bool:
        return isinstance(other, Clustering) and np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash(self.labels.tobytes())


class ClusterAlgorithm(Protocol):
    """Anything that partitions a graph; must be deterministic in ``(graph, seed)``."""

    name: str

    def cluster(self, G: Graph, seed: int = 0) -> Clustering: ...


def component_clustering(G: Graph) -> Clustering:
    """One cluster per connected component."""
    return Clustering(connected_components(G))
