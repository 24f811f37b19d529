"""Modularity-maximising clusterers: CNM fast greedy and Louvain multilevel."""

from __future__ import annotations

import heapq

import numpy as np
import scipy.sparse as sp

from .. import kernels
from ..graph import Graph
from .base import Clustering


def _singletons(G: Graph) -> Clustering:
    return Clustering(np.arange(G.n, dtype=np.int64))


def fast_greedy_modularity(G: Graph) -> Clustering:
    """Clauset-Newman-Moore agglomeration, cut at the modularity peak.

    Starting from singletons, the connected pair with the largest modularity
    gain is merged until no connected pairs remain; the partition with the
    highest modularity seen along the way is returned (earliest on ties).
    Heap ties are broken by the lower community ids.
    """
    if G.m == 0:
        return _singletons(G)
    n = G.n
    two_m = 2.0 * G.m
    a = (G.degrees / two_m).tolist()
    dq: list[dict] = [dict() for _ in range(n)]
    heap = []
    for u, v in G.edges().tolist():
        val = 2.0 * (1.0 / two_m - a[u] * a[v])
        dq[u][v] = val
        dq[v][u] = val
        heap.append((-val, u, v))
    heapq.heapify(heap)

    q = -sum(x * x for x in a)
    best_q, best_step = q, 0
    merges = []
    while heap:
        neg, i, j = heapq.heappop(heap)
        cur = dq[i].get(j)
        if cur is None or cur != -neg:
            continue
        # fold the community with fewer neighbours into the other
        if len(dq[j]) > len(dq[i]) or (len(dq[j]) == len(dq[i]) and j < i):
            i, j = j, i
        q += cur
        merges.append((i, j))
        di, dj = dq[i], dq[j]
        del di[j]
        del dj[i]
        for k in set(di) | set(dj):
            if k in di and k in dj:
                val = di[k] + dj[k]
            elif k in dj:
                val = dj[k] - 2.0 * a[i] * a[k]
            else:
                val = di[k] - 2.0 * a[j] * a[k]
            di[k] = val
            dq[k][i] = val
            dq[k].pop(j, None)
            heapq.heappush(heap, (-val, min(i, k), max(i, k)))
        dq[j] = {}
        a[i] += a[j]
        a[j] = 0.0
        if q > best_q:
            best_q, best_step = q, len(merges)

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in merges[:best_step]:
        parent[find(j)] = find(i)
    return Clustering.from_labels([find(v) for v in range(n)])


def _aggregate(A: sp.csr_matrix, comm: np.ndarray, nc: int) -> sp.csr_matrix:
    P = sp.csr_matrix((np.ones(len(comm)), (np.arange(len(comm)), comm)), shape=(len(comm), nc))
    B = (P.T @ A @ P).tocsr()
    B.sum_duplicates()
    B.sort_indices()
    return B


def multilevel_modularity(G: Graph, seed: int = 0, max_passes: int = 1000, max_levels: int = 100) -> Clustering:
    """Louvain: local moves to the best neighbouring community, then coarsening.

    The vertex visiting order of each level is a seeded permutation. Stops when
    a level makes no move.
    """
    if G.m == 0:
        return _singletons(G)
    rng = np.random.default_rng(seed)
    A = G.adjacency_matrix()
    membership = np.arange(G.n, dtype=np.int64)
    for _ in range(max_levels):
        nc = A.shape[0]
        k = np.asarray(A.sum(axis=1)).ravel()
        m2 = float(k.sum())
        comm = np.arange(nc, dtype=np.int64)
        tot = k.copy()
        order = rng.permutation(nc).astype(np.int64)
        moves = kernels.local_move(
            A.indptr.astype(np.int64), A.indices.astype(np.int64), A.data.astype(np.float64),
            k, comm, tot, order, m2, max_passes,
        )
        if moves == 0:
            break
        dense = Clustering.from_labels(comm).labels
        membership = dense[membership]
        new_nc = int(dense.max()) + 1
        if new_nc == nc:
            break
        A = _aggregate(A, dense, new_nc)
    return Clustering.from_labels(membership)


class FastGreedy:
    name = "fastgreedy"

    def cluster(self, G: Graph, seed: int | None = None) -> Clustering:
        return fast_greedy_modularity(G)


class MultiLevel:
    name = "multilevel"

    def __init__(self, max_passes: int = 1000):
        self.max_passes = max_passes

    def cluster(self, G: Graph, seed: int | None = None) -> Clustering:
        return multilevel_modularity(G, 0 if seed is None else seed, self.max_passes)
