"""Partition-quality measures: NMI, conductance, modularity and cut deltas."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .algorithms.base import Clustering
from .graph import Graph


class MetricError(ValueError):
    pass


def _labels(c) -> np.ndarray:
    return c.labels if isinstance(c, Clustering) else np.asarray(c)


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray  # rows: predicted clusters, cols: truth clusters
    row_sums: np.ndarray
    col_sums: np.ndarray
    total: int


def contingency_table(predicted, truth) -> ContingencyTable:
    p, t = _labels(predicted), _labels(truth)
    if len(p) != len(t):
        raise MetricError(f"clusterings cover {len(p)} and {len(t)} vertices")
    _, pi = np.unique(p, return_inverse=True)
    _, ti = np.unique(t, return_inverse=True)
    counts = sp.coo_matrix(
        (np.ones(len(p), dtype=np.int64), (pi.ravel(), ti.ravel())),
        shape=(pi.max() + 1 if len(p) else 0, ti.max() + 1 if len(t) else 0),
    ).toarray()
    return ContingencyTable(counts, counts.sum(1), counts.sum(0), len(p))


def _entropy(sizes, N) -> float:
    sizes = sizes[sizes > 0]
    q = sizes / N
    return float(-(q * np.log(q)).sum())


def nmi(predicted, truth) -> float:
    """Normalized mutual information ``I / ((H1 + H2) / 2)`` with natural logs.

    Two single-cluster partitions score 1.
    """
    tab = contingency_table(predicted, truth)
    N = tab.total
    if N == 0:
        raise MetricError("clusterings are empty")
    h = _entropy(tab.row_sums, N) + _entropy(tab.col_sums, N)
    if h == 0.0:
        return 1.0
    r, c = np.nonzero(tab.counts)
    if len(r) == tab.counts.shape[0] == tab.counts.shape[1]:
        # one-to-one cluster matching: identical partitions, avoid round-off below 1
        return 1.0
    nij = tab.counts[r, c].astype(np.float64)
    mi = float((nij / N * np.log(N * nij / (tab.row_sums[r] * tab.col_sums[c]))).sum())
    return min(max(mi / (h / 2.0), 0.0), 1.0)


def _membership(G: Graph, S) -> np.ndarray:
    S = np.asarray(S, dtype=np.int64)
    mask = np.zeros(G.n, dtype=bool)
    mask[S] = True
    return mask


def cut_size(G: Graph, S) -> int:
    """Number of edges with exactly one endpoint in ``S``."""
    mask = _membership(G, S)
    rows = np.repeat(mask, G.degrees)
    return int((rows & ~mask[G.indices]).sum())


def conductance(G: Graph, S) -> float:
    """``cut(S) / min(vol(S), vol(complement))``."""
    mask = _membership(G, S)
    k = int(mask.sum())
    if k == 0 or k == G.n:
        raise MetricError("conductance needs a nonempty proper vertex subset")
    cut = cut_size(G, S)
    vol_s = int(G.degrees[mask].sum())
    denom = min(vol_s, 2 * G.m - vol_s)
    if denom == 0:
        return 0.0 if cut == 0 else 1.0
    return cut / denom


def log_bin(size: int, base: float = 2.0) -> int:
    """``floor(log_base(size))`` computed without float drift at exact powers."""
    if size < 1:
        raise ValueError("size must be positive")
    if base <= 1:
        raise ValueError("bin base must exceed 1")
    b = int(math.floor(math.log(size) / math.log(base)))
    while base ** (b + 1) <= size:
        b += 1
    while b > 0 and base**b > size:
        b -= 1
    return b


def conductance_report(G: Graph, clustering, bin_base: float = 2.0) -> dict:
    """Per-cluster conductance and log-binned summaries.

    Clusters with no outgoing edges (unions of whole connected components,
    including a cluster spanning the whole graph) are flagged ``excluded``
    and left out of bin means; bin ``count`` includes them.
    """
    labels = _labels(clustering)
    if len(labels) != G.n:
        raise MetricError(f"clustering covers {len(labels)} vertices, graph has {G.n}")
    cl = clustering if isinstance(clustering, Clustering) else Clustering.from_labels(labels)
    clusters = []
    for c, members in enumerate(cl.clusters()):
        cut = cut_size(G, members)
        excluded = cut == 0
        phi = None if excluded else conductance(G, members)
        clusters.append({
            "cluster": c,
            "size": int(len(members)),
            "conductance": phi,
            "excluded": excluded,
            "bin": log_bin(len(members), bin_base),
        })
    bins = {}
    for rec in clusters:
        bins.setdefault(rec["bin"], []).append(rec)
    summary = []
    for b in sorted(bins):
        recs = bins[b]
        phis = [r["conductance"] for r in recs if not r["excluded"]]
        summary.append({
            "bin": b,
            "size_low": bin_base**b,
            "size_high": bin_base ** (b + 1),
            "count": len(recs),
            "included": len(phis),
            "mean_size": float(np.mean([r["size"] for r in recs])),
            "mean_conductance": float(np.mean(phis)) if phis else None,
        })
    return {"bin_base": bin_base, "clusters": clusters, "bins": summary}


def modularity(G: Graph, clustering) -> float:
    """Newman-Girvan modularity, resolution 1."""
    if G.m == 0:
        raise MetricError("modularity is undefined for an edgeless graph")
    labels = _labels(clustering)
    if len(labels) != G.n:
        raise MetricError(f"clustering covers {len(labels)} vertices, graph has {G.n}")
    _, lab = np.unique(labels, return_inverse=True)
    lab = lab.ravel()
    rows = np.repeat(lab, G.degrees)
    intra = np.bincount(lab[G.indices][rows == lab[G.indices]], minlength=lab.max() + 1) / 2.0
    vol = np.bincount(lab, weights=G.degrees, minlength=lab.max() + 1)
    m = G.m
    return float((intra / m - (vol / (2.0 * m)) ** 2).sum())


def delta_cut(G: Graph, cluster, v: int) -> int:
    """Growth of the cluster's cut when the new vertex ``v`` joins it: ``deg(v) - |N(v) & C|``."""
    members = np.asarray(cluster, dtype=np.int64)
    if (members == v).any():
        raise MetricError(f"vertex {v} is already in the cluster")
    nb = G.neighbors(v)
    return int(len(nb) - np.isin(nb, members).sum())
