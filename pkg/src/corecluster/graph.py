"""Immutable simple undirected graphs in CSR form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class GraphError(ValueError):
    """Raised for malformed graph input or out-of-range vertex ids."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph with dense vertex ids ``0..n-1``.

    Adjacency is stored in CSR form: the neighbours of ``v`` are
    ``indices[indptr[v]:indptr[v + 1]]``, sorted ascending.
    ``label_map[v]`` is the external id that internal vertex ``v`` was built from.
    """

    indptr: np.ndarray
    indices: np.ndarray
    label_map: np.ndarray
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0
    _degrees: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        for arr in (self.indptr, self.indices, self.label_map):
            arr.setflags(write=False)
        deg = np.diff(self.indptr)
        deg.setflags(write=False)
        object.__setattr__(self, "_degrees", deg)

    @property
    def vertex_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    n = vertex_count
    m = edge_count

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    def degree(self, v: int) -> int:
        self._check(v)
        return int(self._degrees[v])

    def neighbors(self, v: int) -> np.ndarray:
        self._check(v)
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def edges(self) -> np.ndarray:
        """Return the ``(m, 2)`` array of edges with ``u < v``, lexicographically sorted."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self._degrees)
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def adjacency_matrix(self) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def external_id(self, v: int):
        return self.label_map[v].item()

    def internal_ids(self) -> dict:
        """Map external id -> internal id."""
        return {x.item(): i for i, x in enumerate(self.label_map)}

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise GraphError(f"vertex {v} out of range for graph with {self.n} vertices")

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _from_canonical_edges(n: int, edges: np.ndarray, label_map: np.ndarray, loops: int = 0, dups: int = 0) -> Graph:
    """Build CSR from unique ``u < v`` edge pairs over vertices ``0..n-1``."""
    if len(edges):
        src = np.concatenate([edges[:, 0], edges[:, 1]])
        dst = np.concatenate([edges[:, 1], edges[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
    else:
        src = dst = np.empty(0, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return Graph(indptr, dst.astype(np.int64, copy=False), label_map, loops, dups)


def build_graph(edges: Iterable[Sequence[int]], vertices: Iterable[int] | None = None) -> Graph:
    """Build a simple graph from an edge list of non-negative integer ids.

    External ids are compacted to ``0..n-1`` in ascending external-id order.
    Self-loops and repeated edges are dropped; their counts are kept on the
    returned graph. ``vertices`` adds ids that may not appear in any edge.
    """
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges)
    if arr.size == 0:
        arr = np.empty((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphError(f"edges must be pairs, got array of shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise GraphError("vertex ids must be integers")
    arr = arr.astype(np.int64, copy=False)
    if (arr < 0).any():
        idx = int(np.argwhere(arr < 0)[0, 0])
        raise GraphError(f"negative vertex id in edge {idx}: {tuple(arr[idx])}")

    ids = arr.ravel()
    if vertices is not None:
        extra = np.asarray(list(vertices), dtype=np.int64)
        if (extra < 0).any():
            raise GraphError("negative vertex id")
        ids = np.concatenate([ids, extra])
    label_map, inverse = np.unique(ids, return_inverse=True)
    pairs = inverse[: arr.size].reshape(-1, 2).astype(np.int64)

    loops = pairs[:, 0] == pairs[:, 1]
    pairs = np.sort(pairs[~loops], axis=1)
    uniq = np.unique(pairs, axis=0) if len(pairs) else pairs
    return _from_canonical_edges(
        len(label_map), uniq, label_map, int(loops.sum()), int(len(pairs) - len(uniq))
    )


def induced_subgraph(G: Graph, S) -> tuple[Graph, np.ndarray]:
    """Subgraph induced by the ordered vertex set ``S``.

    Returns ``(H, old_ids)``: vertex ``j`` of ``H`` is vertex ``old_ids[j] == S[j]``
    of ``G``. ``H.label_map`` carries the external ids of ``G``.
    """
    S = np.asarray(S, dtype=np.int64).ravel()
    if len(S) and (S.min() < 0 or S.max() >= G.n):
        raise GraphError(f"vertex set has ids outside 0..{G.n - 1}")
    pos = np.full(G.n, -1, dtype=np.int64)
    pos[S] = np.arange(len(S))
    if (pos[S] != np.arange(len(S))).any():
        raise GraphError("vertex set contains duplicates")

    deg = G.degrees[S]
    starts = G.indptr[S]
    rows = np.repeat(np.arange(len(S), dtype=np.int64), deg)
    offs = np.arange(deg.sum(), dtype=np.int64) - np.repeat(np.cumsum(deg) - deg, deg)
    nbrs = pos[G.indices[np.repeat(starts, deg) + offs]]
    keep = (nbrs >= 0) & (rows < nbrs)
    edges = np.column_stack([rows[keep], nbrs[keep]])
    H = _from_canonical_edges(len(S), edges, G.label_map[S])
    return H, S.copy()


def triangle_counts(G: Graph) -> np.ndarray:
    """Number of triangles through each vertex."""
    A = G.adjacency_matrix()
    return np.asarray((A @ A).multiply(A).sum(axis=1)).ravel().astype(np.int64) // 2


def local_clustering_coefficients(G: Graph) -> np.ndarray:
    deg = G.degrees.astype(np.float64)
    tri = triangle_counts(G).astype(np.float64)
    out = np.zeros(G.n)
    ok = deg > 1
    out[ok] = 2.0 * tri[ok] / (deg[ok] * (deg[ok] - 1.0))
    return out


def local_clustering_coefficient(G: Graph, v: int) -> float:
    """Fraction of pairs of neighbours of ``v`` that are adjacent; 0 when ``deg(v) <= 1``."""
    nb = G.neighbors(v)
    d = len(nb)
    if d <= 1:
        return 0.0
    nbset = set(nb.tolist())
    links = sum(1 for u in nb for w in G.neighbors(u) if w in nbset)
    # each neighbour pair was counted from both ends
    return links / (d * (d - 1))


def global_clustering_coefficient(G: Graph) -> float:
    if G.n == 0:
        raise GraphError("clustering coefficient of an empty graph is undefined")
    return float(local_clustering_coefficients(G).mean())


def connected_components(G: Graph) -> np.ndarray:
    """Component label per vertex, numbered by smallest member id."""
    from scipy.sparse.csgraph import connected_components as cc

    if G.n == 0:
        return np.empty(0, dtype=np.int64)
    _, labels = cc(G.adjacency_matrix(), directed=False)
    # scipy numbers components in order of first vertex already; keep explicit
    _, first = np.unique(labels, return_index=True)
    remap = np.empty(len(first), dtype=np.int64)
    remap[np.argsort(first, kind="stable")] = np.arange(len(first))
    return remap[labels]
