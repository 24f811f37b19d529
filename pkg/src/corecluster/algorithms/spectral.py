"""Normalized-Laplacian spectral clustering (Ng, Jordan and Weiss) with k-means++."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla

from ..graph import Graph
from .base import CapacityError, Clustering, ClusteringError, component_clustering

GAP_EPS = 1e-8


@dataclass(frozen=True)
class SpectralConfig:
    """Knobs for :func:`spectral_cluster`. ``rho=None`` picks the count by eigengap."""

    rho: int | None = None
    max_eigen_index: int = 50
    dense_solver_limit: int = 4000
    kmeans_max_iters: int = 100
    kmeans_restarts: int = 5
    seed: int = 0

    def __post_init__(self):
        for name in ("max_eigen_index", "dense_solver_limit", "kmeans_max_iters", "kmeans_restarts"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.rho is not None and self.rho < 1:
            raise ValueError("rho must be positive")


def normalized_laplacian(G: Graph, dense_solver_limit: int = 4000) -> np.ndarray:
    """Dense ``I - D^-1/2 W D^-1/2``; rows and columns of isolated vertices are all zero."""
    if G.n > dense_solver_limit:
        raise CapacityError(f"graph has {G.n} vertices, dense solver limit is {dense_solver_limit}")
    deg = G.degrees.astype(np.float64)
    inv_sqrt = np.zeros(G.n)
    nz = deg > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(deg[nz])
    L = np.zeros((G.n, G.n))
    rows = np.repeat(np.arange(G.n), G.degrees)
    L[rows, G.indices] = -inv_sqrt[rows] * inv_sqrt[G.indices]
    L[np.arange(G.n), np.arange(G.n)] = nz.astype(np.float64)
    return L


def eigengap_cluster_count(eigenvalues, max_eigen_index: int = 50) -> int:
    """1-based index ``i <= max_eigen_index`` of the largest gap ``lam[i+1] - lam[i]``.

    The first maximum wins. Returns 1 when there are fewer than two values or
    every gap is below ``1e-8``.
    """
    lam = np.asarray(eigenvalues, dtype=np.float64)
    if len(lam) < 2:
        return 1
    gaps = np.diff(lam[: max_eigen_index + 1])
    i = int(np.argmax(gaps))
    if gaps[i] < GAP_EPS:
        return 1
    return i + 1


def _sq_dists(points, centers):
    d = (points**2).sum(1)[:, None] - 2.0 * points @ centers.T + (centers**2).sum(1)[None, :]
    return np.maximum(d, 0.0)


def _kmeanspp_seed(points, rho, rng):
    n = len(points)
    chosen = [int(rng.integers(n))]
    closest = ((points - points[chosen[0]]) ** 2).sum(1)
    for _ in range(1, rho):
        total = closest.sum()
        if total > 0:
            idx = int(rng.choice(n, p=closest / total))
        else:
            rest = np.setdiff1d(np.arange(n), chosen)
            idx = int(rng.choice(rest))
        chosen.append(idx)
        closest = np.minimum(closest, ((points - points[idx]) ** 2).sum(1))
    return points[chosen].copy()


def _lloyd(points, centers, max_iters):
    labels = None
    for _ in range(max_iters):
        d = _sq_dists(points, centers)
        new = d.argmin(1)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        mind = d[np.arange(len(points)), labels]
        for c in range(len(centers)):
            members = labels == c
            if members.any():
                centers[c] = points[members].mean(0)
            else:
                far = int(mind.argmax())
                centers[c] = points[far]
                mind[far] = 0.0
    wcss = float(((points - centers[labels]) ** 2).sum())
    return labels, wcss


def wcss(points, labels) -> float:
    """Within-cluster sum of squared distances to the cluster means."""
    points = np.asarray(points, dtype=np.float64)
    total = 0.0
    for c in np.unique(labels):
        p = points[labels == c]
        total += float(((p - p.mean(0)) ** 2).sum())
    return total


def kmeans_pp(points, rho: int, seed: int = 0, max_iters: int = 100, restarts: int = 5) -> np.ndarray:
    """k-means with k-means++ seeding; best of ``restarts`` runs by WCSS."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    n = len(points)
    if rho > n:
        raise ClusteringError(f"cannot form {rho} clusters from {n} points")
    if rho < 1:
        raise ClusteringError("rho must be positive")
    rng = np.random.default_rng(seed)
    best, best_cost = None, np.inf
    for _ in range(restarts):
        centers = _kmeanspp_seed(points, rho, rng)
        labels, cost = _lloyd(points, centers, max_iters)
        if cost < best_cost:
            best, best_cost = labels, cost
    return Clustering.from_labels(best).labels


def spectral_embedding(G: Graph, cfg: SpectralConfig) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and eigenvectors of the bottom of the Laplacian spectrum."""
    L = normalized_laplacian(G, cfg.dense_solver_limit)
    top = cfg.rho - 1 if cfg.rho is not None else cfg.max_eigen_index
    top = min(G.n - 1, top)
    return sla.eigh(L, subset_by_index=[0, top])


def spectral_cluster(G: Graph, cfg: SpectralConfig = SpectralConfig()) -> Clustering:
    if G.n == 0:
        raise ClusteringError("cannot cluster an empty graph")
    if G.n > cfg.dense_solver_limit:
        raise CapacityError(f"graph has {G.n} vertices, dense solver limit is {cfg.dense_solver_limit}")
    if G.m == 0 or G.n <= 2 or (cfg.rho is not None and cfg.rho > G.n):
        return component_clustering(G)
    vals, vecs = spectral_embedding(G, cfg)
    rho = cfg.rho if cfg.rho is not None else eigengap_cluster_count(vals, cfg.max_eigen_index)
    if rho == 1:
        return Clustering(np.zeros(G.n, dtype=np.int64))

    Y = vecs[:, :rho]
    norms = np.linalg.norm(Y, axis=1)
    live = norms > 0
    Y = Y[live] / norms[live, None]
    if live.sum() < rho:
        return component_clustering(G)
    sub = kmeans_pp(Y, rho, cfg.seed, cfg.kmeans_max_iters, cfg.kmeans_restarts)
    labels = np.empty(G.n, dtype=np.int64)
    labels[live] = sub
    if not live.all():
        # zero rows sit at the origin: give them the cluster whose centroid is closest to it
        cents = np.array([Y[sub == c].mean(0) for c in range(sub.max() + 1)])
        labels[~live] = int(np.argmin((cents**2).sum(1)))
    return Clustering.from_labels(labels)


class SpectralClustering:
    name = "spectral"

    def __init__(self, config: SpectralConfig = SpectralConfig()):
        self.config = config

    def cluster(self, G: Graph, seed: int | None = None) -> Clustering:
        cfg = self.config if seed is None else replace(self.config, seed=seed)
        return spectral_cluster(G, cfg)
