"""Empirical checks on how the core hierarchy relates to clustering structure.

Two studies live here: eigenspace perturbation between successive cores
(measured canonical angles against Davis-Kahan style bounds) and how the
clustering coefficient evolves from the whole graph to the maximum core.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

import numpy as np

from .algorithms.spectral import eigengap_cluster_count, normalized_laplacian
from .degeneracy import CoreDecomposition, k_core
from .graph import Graph, induced_subgraph, local_clustering_coefficients

log = logging.getLogger(__name__)

ORTHO_TOL = 1e-6
# eigensolver noise floor: a zero bound still admits round-off of this size
BOUND_TOL = 1e-8
CC_EXPONENT = 2.0 / 3.0


def sin_theta(U1, U2) -> tuple[float, float]:
    """Frobenius and spectral norms of sin(Theta) between two column spaces.

    The sines are the singular values of ``(I - U1 U1^T) U2``, which keeps
    small angles accurate; they agree with ``sqrt(1 - cos^2)`` from the
    singular values of ``U1^T U2``.
    """
    U1 = np.asarray(U1, dtype=np.float64)
    U2 = np.asarray(U2, dtype=np.float64)
    if U1.ndim != 2 or U1.shape != U2.shape:
        raise ValueError(f"shape mismatch: {U1.shape} vs {U2.shape}")
    rho = U1.shape[1]
    for U in (U1, U2):
        if np.abs(U.T @ U - np.eye(rho)).max() > ORTHO_TOL:
            raise ValueError("inputs must have orthonormal columns")
    if rho == 0:
        return 0.0, 0.0
    # average both directions so the result is symmetric in its arguments
    s12 = np.linalg.svd(U2 - U1 @ (U1.T @ U2), compute_uv=False)
    s21 = np.linalg.svd(U1 - U2 @ (U2.T @ U1), compute_uv=False)
    s = np.clip(0.5 * (np.sort(s12) + np.sort(s21)), 0.0, 1.0)
    return float(np.sqrt((s**2).sum())), float(s.max())


@dataclass
class CoreTransitionReport:
    rank: int
    degeneracy: int
    rho: int
    n_inner: int
    n_outer: int
    delta_edges: int
    j_edges: int
    j_entries: int
    eigengap: float
    applicable: bool
    reason: str = ""
    measured_f: float = float("nan")
    measured_2: float = float("nan")
    bound_f: float = float("nan")
    bound_2: float = float("nan")
    perturbation_f: float = float("nan")
    perturbation_2: float = float("nan")
    residual_bound_f: float = float("nan")
    residual_bound_2: float = float("nan")

    @property
    def holds_f(self) -> bool | None:
        return None if not self.applicable else self.measured_f <= self.bound_f + BOUND_TOL

    @property
    def holds_2(self) -> bool | None:
        return None if not self.applicable else self.measured_2 <= self.bound_2 + BOUND_TOL

    def to_dict(self) -> dict:
        d = asdict(self)
        d["holds_f"] = self.holds_f
        d["holds_2"] = self.holds_2
        return d


def _edge_key(u, v, n):
    return np.minimum(u, v) * n + np.maximum(u, v)


def _incident_edge_union(G: Graph, outer: np.ndarray, changed: np.ndarray) -> int:
    """Edges of ``G[outer]`` that share an endpoint with (or are) a changed edge."""
    H, ids = induced_subgraph(G, outer)
    pos = np.full(G.n, -1, dtype=np.int64)
    pos[ids] = np.arange(len(ids))
    touched = np.zeros(H.n, dtype=bool)
    touched[pos[changed.ravel()]] = True
    e = H.edges()
    return int((touched[e[:, 0]] | touched[e[:, 1]]).sum())


def core_transition_report(G: Graph, decomp: CoreDecomposition, i: int, rho: int | None = None,
                           dense_solver_limit: int = 4000) -> CoreTransitionReport:
    """Compare the bottom eigenspaces of the ``i``-core Laplacian (restricted to
    the ``(i+1)``-core) and of the ``(i+1)``-core Laplacian.

    ``j_entries`` counts Laplacian entries that differ between the two
    matrices and feeds the Frobenius bound; ``j_edges`` is the edge-level
    count of edges touching a removed edge, reported for comparison.
    """
    k = decomp.degeneracy
    if not 0 <= i < k:
        raise ValueError(f"transition rank {i} outside 0..{k - 1}")
    outer = k_core(G, decomp, i)
    inner = k_core(G, decomp, i + 1)
    if max(len(outer), len(inner)) > dense_solver_limit:
        raise ValueError("core too large for the dense solver")

    G_out, _ = induced_subgraph(G, outer)
    G_in, _ = induced_subgraph(G, inner)
    pos = np.searchsorted(outer, inner)
    L_hat = normalized_laplacian(G_out, dense_solver_limit)[np.ix_(pos, pos)]
    L_in = normalized_laplacian(G_in, dense_solver_limit)
    E = L_hat - L_in

    in_inner = np.zeros(G.n, dtype=bool)
    in_inner[inner] = True
    eo = outer[G_out.edges()]
    crossing = eo[in_inner[eo[:, 0]] ^ in_inner[eo[:, 1]]]
    j_edges = _incident_edge_union(G, outer, crossing) if len(crossing) else 0
    j_entries = int((E != 0.0).sum())

    n_in = len(inner)
    base = dict(rank=i, degeneracy=k, n_inner=n_in, n_outer=len(outer), delta_edges=len(crossing),
                j_edges=j_edges, j_entries=j_entries)

    lam_in, vec_in = np.linalg.eigh(L_in)
    if rho is None:
        rho = eigengap_cluster_count(lam_in)
    if rho >= n_in:
        return CoreTransitionReport(rho=rho, eigengap=float("nan"), applicable=False,
                                    reason=f"rho={rho} leaves no eigenvalue rho+1 in a core of {n_in}", **base)
    lam_hat, vec_hat = np.linalg.eigh(L_hat)
    gap = float(lam_in[rho] - lam_hat[rho - 1])
    U1, U1t = vec_hat[:, :rho], vec_in[:, :rho]
    mf, m2 = sin_theta(U1, U1t)
    rep = CoreTransitionReport(rho=rho, eigengap=gap, applicable=True, measured_f=mf, measured_2=m2, **base)
    rep.perturbation_f = float(np.linalg.norm(E, "fro"))
    rep.perturbation_2 = float(np.linalg.norm(E, 2)) if n_in else 0.0
    if gap <= 0:
        rep.applicable = False
        rep.reason = "non-positive eigengap"
        return rep
    ev = np.linalg.eigvalsh(E.T @ E)
    rep.residual_bound_f = float(np.sqrt(max(ev[-rho:].sum(), 0.0)) / gap)
    rep.residual_bound_2 = rep.perturbation_2 / gap
    if i == 0:
        rep.applicable = False
        rep.reason = "rank 0: bound divides by i"
        return rep
    scale = abs(i - k) / (i * k * gap)
    rep.bound_f = float(np.sqrt(j_entries) * scale)
    rep.bound_2 = float(np.sqrt(n_in) * scale)
    if not (rep.holds_f and rep.holds_2):
        log.info("bound violated at rank %d: F %.3g > %.3g or 2 %.3g > %.3g",
                 i, mf, rep.bound_f, m2, rep.bound_2)
    return rep


def transition_reports(G: Graph, decomp: CoreDecomposition, rho: int | None = None,
                       dense_solver_limit: int = 4000) -> list[CoreTransitionReport]:
    return [core_transition_report(G, decomp, i, rho, dense_solver_limit) for i in range(decomp.degeneracy)]


def cc_vs_core_profile(G: Graph, decomp: CoreDecomposition) -> list[dict]:
    """Mean local clustering coefficient of every ``i``-core, ``i = 0..k``.

    ``cc_induced`` measures coefficients inside the induced core,
    ``cc_original`` uses the coefficients of the whole graph. ``x`` is
    ``i / k`` (0 when ``k == 0``).
    """
    k = decomp.degeneracy
    cc_full = local_clustering_coefficients(G)
    out = []
    for i in range(k + 1):
        core = k_core(G, decomp, i)
        H, _ = induced_subgraph(G, core)
        out.append({
            "rank": i,
            "x": i / k if k else 0.0,
            "cc_induced": float(local_clustering_coefficients(H).mean()) if H.n else 0.0,
            "cc_original": float(cc_full[core].mean()) if len(core) else 0.0,
            "core_size": int(len(core)),
        })
    return out


def degeneracy_cc_bound_check(G: Graph, decomp: CoreDecomposition | None = None) -> dict:
    """Check ``k >= gamma * sum_v C_v`` with ``gamma = d_max^(2/3) / (2n)``.

    The inequality is expected for heavy-tailed degree sequences only, so a
    failure is a finding rather than an error.
    """
    from .degeneracy import core_decomposition

    if G.n == 0:
        raise ValueError("empty graph")
    if decomp is None:
        decomp = core_decomposition(G)
    d_max = int(G.degrees.max())
    total_cc = float(local_clustering_coefficients(G).sum())
    gamma = d_max**CC_EXPONENT / (2.0 * G.n) if d_max else 0.0
    rhs = gamma * total_cc
    return {
        "degeneracy": decomp.degeneracy,
        "d_max": d_max,
        "n": G.n,
        "gamma": gamma,
        "sum_cc": total_cc,
        "rhs": rhs,
        "holds": decomp.degeneracy >= rhs,
    }
