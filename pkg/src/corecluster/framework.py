"""CoreCluster: run a clustering algorithm incrementally along the k-core hierarchy.

The base algorithm clusters the densest core. Each lower layer is then
handled by ``select``: vertices whose neighbourhood is dominated by one
existing cluster join it, and whatever cannot be placed is handed to the base
algorithm to form new clusters.

Functions that take a ``coreness``/``level`` pair look at neighbourhoods
inside the ``level``-core only, which is how the current core graph ``G_i``
is represented without materialising it.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .algorithms.base import ClusterAlgorithm, Clustering
from .degeneracy import CoreDecomposition, core_decomposition
from .graph import Graph, connected_components, induced_subgraph


class SpanZeroPolicy(str, Enum):
    SINGLETON_COMPONENTS = "singleton_components"
    LITERAL_ARGSPAN = "literal_argspan"


class CoreClusterError(RuntimeError):
    pass


@dataclass(frozen=True)
class SelectionParams:
    alpha: float = 0.7
    beta: int = 2
    min_cluster_input: int = 3
    span_zero_policy: SpanZeroPolicy = SpanZeroPolicy.SINGLETON_COMPONENTS

    def __post_init__(self):
        if not 0.5 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0.5, 1], got {self.alpha}")
        if int(self.beta) != self.beta or self.beta < 1:
            raise ValueError(f"beta must be a positive integer, got {self.beta}")
        if int(self.min_cluster_input) != self.min_cluster_input or self.min_cluster_input < 1:
            raise ValueError("min_cluster_input must be a positive integer")
        object.__setattr__(self, "span_zero_policy", SpanZeroPolicy(self.span_zero_policy))


class ClusterFamily:
    """Disjoint clusters over vertices ``0..n-1``; ``labels[v] == -1`` means unclustered."""

    def __init__(self, n: int):
        self.labels = np.full(n, -1, dtype=np.int64)
        self._sizes: list[int] = []

    @classmethod
    def from_sets(cls, n: int, sets) -> "ClusterFamily":
        fam = cls(n)
        for s in sets:
            fam.new_cluster(s)
        return fam

    def __len__(self) -> int:
        return len(self._sizes)

    @property
    def sizes(self) -> np.ndarray:
        return np.asarray(self._sizes, dtype=np.int64)

    def new_cluster(self, vertices) -> int:
        vertices = np.asarray(vertices, dtype=np.int64)
        if not vertices.size:
            raise ValueError("clusters must be nonempty")
        if (self.labels[vertices] >= 0).any():
            raise ValueError("vertex already belongs to a cluster")
        c = len(self._sizes)
        self.labels[vertices] = c
        self._sizes.append(len(vertices))
        return c

    def add(self, v: int, c: int) -> None:
        if self.labels[v] >= 0:
            raise ValueError(f"vertex {v} already belongs to cluster {self.labels[v]}")
        self.labels[v] = c
        self._sizes[c] += 1

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.labels == c)

    def clustered(self) -> np.ndarray:
        return np.flatnonzero(self.labels >= 0)

    def _recount(self) -> None:
        self._sizes = np.bincount(self.labels[self.labels >= 0], minlength=len(self._sizes)).tolist()

    def to_clustering(self) -> Clustering:
        if (self.labels < 0).any():
            raise CoreClusterError(f"{int((self.labels < 0).sum())} vertices left unclustered")
        return Clustering(self.labels.copy())


@dataclass
class CandidateTriple:
    """``(G_i, F, V)``: the core graph, the clusters so far and the pending layer.

    ``graph`` is the whole graph; ``coreness``/``level`` restrict it to the
    ``level``-core. With ``coreness=None`` the whole graph is used.
    """

    graph: Graph
    clusters: ClusterFamily
    pending: np.ndarray
    coreness: np.ndarray | None = None
    level: int = 0

    def __post_init__(self):
        self.pending = np.asarray(self.pending, dtype=np.int64)
        if self.coreness is None:
            self.coreness = np.zeros(self.graph.n, dtype=np.int64)
        if (self.clusters.labels[self.pending] >= 0).any():
            raise ValueError("pending vertices must not belong to a cluster")


def _core_neighbors(G: Graph, v: int, coreness, level: int) -> np.ndarray:
    nb = G.neighbors(v)
    if coreness is None:
        return nb
    return nb[coreness[nb] >= level]


def criterion(G: Graph, clusters: ClusterFamily, v: int, params: SelectionParams,
              coreness=None, level: int = 0) -> int | None:
    """Certificate cluster of ``v``, or None.

    ``v`` qualifies when it has at least ``beta`` neighbours and a fraction of
    at least ``alpha`` of them lie in a single cluster. With ``alpha > 0.5``
    that cluster is unique.
    """
    nb = _core_neighbors(G, v, coreness, level)
    deg = len(nb)
    if deg == 0 or deg < params.beta:
        return None
    lab = clusters.labels[nb]
    lab = lab[lab >= 0]
    if not lab.size:
        return None
    counts = np.bincount(lab)
    c = int(counts.argmax())
    return c if counts[c] / deg >= params.alpha else None


def span(G: Graph, clusters: ClusterFamily, v: int, coreness=None, level: int = 0,
         policy: SpanZeroPolicy = SpanZeroPolicy.SINGLETON_COMPONENTS) -> tuple[int, int | None]:
    """``(span, argspan)``: largest neighbour overlap with a cluster, and the
    smallest cluster attaining it (lowest index on ties).

    A zero span has no argspan under ``singleton_components``; under
    ``literal_argspan`` every cluster attains it, so the smallest one is returned.
    """
    if len(clusters) == 0:
        return 0, None
    core = np.zeros(G.n, dtype=np.int64) if coreness is None else coreness
    s, a = kernels.spans(G.indptr, G.indices, core, level, clusters.labels, clusters.sizes, [v])
    if s[0] == 0:
        if SpanZeroPolicy(policy) is SpanZeroPolicy.LITERAL_ARGSPAN:
            return 0, int(np.argmin(clusters.sizes))
        return 0, None
    return int(s[0]), int(a[0])


def _components_as_clusters(G: Graph, clusters: ClusterFamily, S: np.ndarray) -> int:
    H, ids = induced_subgraph(G, S)
    comp = connected_components(H)
    for members in Clustering(comp).clusters():
        clusters.new_cluster(ids[members])
    return int(comp.max()) + 1 if comp.size else 0


def assign(G: Graph, clusters: ClusterFamily, S, policy: SpanZeroPolicy = SpanZeroPolicy.SINGLETON_COMPONENTS,
           coreness=None, level: int = 0) -> int:
    """Place every vertex of ``S`` by decreasing span; returns the number of clusters created.

    Each round takes the vertices of maximum span ``l`` (ascending id) and puts
    each into its argspan, evaluated when the vertex is placed. Once ``l`` is
    zero the rest is handled by ``policy``: new clusters from the connected
    components of ``G[S]``, or the currently smallest cluster.
    """
    policy = SpanZeroPolicy(policy)
    core = np.zeros(G.n, dtype=np.int64) if coreness is None else coreness
    remaining = np.unique(np.asarray(S, dtype=np.int64))
    if (clusters.labels[remaining] >= 0).any():
        raise ValueError("assign: S must be disjoint from the clusters")
    labels = clusters.labels
    created = 0
    while remaining.size:
        if len(clusters) == 0:
            return created + _components_as_clusters(G, clusters, remaining)
        sp, _ = kernels.spans(G.indptr, G.indices, core, level, labels, clusters.sizes, remaining)
        ell = int(sp.max())
        if ell == 0:
            if policy is SpanZeroPolicy.SINGLETON_COMPONENTS:
                created += _components_as_clusters(G, clusters, remaining)
            else:
                for v in remaining.tolist():
                    clusters.add(v, int(np.argmin(clusters.sizes)))
            break
        for v in remaining[sp == ell].tolist():
            _, a = kernels.spans(G.indptr, G.indices, core, level, labels, clusters.sizes, [v])
            clusters.add(v, int(a[0]))
        remaining = remaining[sp != ell]
    return created


@dataclass
class SelectOutcome:
    unassigned: np.ndarray
    absorbed: int
    assigned: int
    created: int


def _select(triple: CandidateTriple, params: SelectionParams) -> SelectOutcome:
    G, fam, lvl, core = triple.graph, triple.clusters, triple.level, triple.coreness
    pending = np.sort(triple.pending)
    absorbed = kernels.absorb(
        G.indptr, G.indices, core, lvl, fam.labels, len(fam), pending, params.alpha, params.beta
    )
    if absorbed.size:
        fam._recount()
    rest = pending[fam.labels[pending] < 0]
    if not rest.size:
        return SelectOutcome(rest, len(absorbed), 0, 0)

    deg = G.degrees[rest]
    owner = np.repeat(rest, deg)
    offs = np.arange(deg.sum()) - np.repeat(np.cumsum(deg) - deg, deg)
    nbrs = G.indices[np.repeat(G.indptr[rest], deg) + offs]
    inside = core[nbrs] >= lvl
    touches = np.zeros(G.n, dtype=bool)
    touches[owner[inside & (fam.labels[nbrs] >= 0)]] = True
    v1 = rest[touches[rest]]
    v2 = rest[~touches[rest]]
    in_v2 = np.zeros(G.n, dtype=bool)
    in_v2[v2] = True
    independent = not (in_v2[owner] & in_v2[nbrs] & inside).any()
    if v2.size == 0 or independent:
        created = assign(G, fam, v1, params.span_zero_policy, core, lvl)
        created += assign(G, fam, v2, params.span_zero_policy, core, lvl)
        return SelectOutcome(np.empty(0, dtype=np.int64), len(absorbed), len(rest), created)
    return SelectOutcome(rest, len(absorbed), 0, 0)


def select(triple: CandidateTriple, params: SelectionParams = SelectionParams()) -> np.ndarray:
    """Absorb what the criterion allows, then either assign the rest or return it.

    Mutates ``triple.clusters``. Returns the vertices left for the base
    algorithm (empty when everything was placed).
    """
    return _select(triple, params).unassigned


@dataclass
class LayerRecord:
    rank: int
    layer_size: int
    selected: int
    absorbed: int
    assigned: int
    clusters_created: int
    base_time: float


@dataclass
class CoreClusterTrace:
    n: int
    degeneracy: int
    layers: list = field(default_factory=list)
    decomposition_time: float = 0.0
    total_time: float = 0.0

    def check_conservation(self) -> None:
        for r in self.layers:
            if r.absorbed + r.assigned + r.selected != r.layer_size:
                raise CoreClusterError(
                    f"layer {r.rank}: absorbed {r.absorbed} + assigned {r.assigned}"
                    f" + selected {r.selected} != layer size {r.layer_size}"
                )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "degeneracy": self.degeneracy,
            "decomposition_time": self.decomposition_time,
            "total_time": self.total_time,
            "layers": [asdict(r) for r in self.layers],
        }


def _run_base(G, S, base, seed, params, fam, rank) -> tuple[int, float]:
    if not S.size:
        return 0, 0.0
    if S.size < params.min_cluster_input:
        return _components_as_clusters(G, fam, S), 0.0
    H, ids = induced_subgraph(G, S)
    t = time.perf_counter()
    try:
        cl = base.cluster(H, seed)
    except Exception as exc:
        name = getattr(base, "name", type(base).__name__)
        raise CoreClusterError(f"base algorithm {name!r} failed on layer {rank} ({S.size} vertices): {exc}") from exc
    elapsed = time.perf_counter() - t
    if len(cl) != H.n:
        raise CoreClusterError(f"base algorithm returned {len(cl)} labels for {H.n} vertices on layer {rank}")
    for members in cl.clusters():
        fam.new_cluster(ids[members])
    return cl.cluster_count, elapsed


def corecluster(G: Graph, base: ClusterAlgorithm, params: SelectionParams = SelectionParams(),
                seed: int = 0, decomp: CoreDecomposition | None = None) -> tuple[Clustering, CoreClusterTrace]:
    """Cluster ``G`` layer by layer from the maximum core outward.

    Returns the clustering of all vertices and a per-layer trace. Clusters are
    numbered in creation order.
    """
    if G.n == 0:
        raise CoreClusterError("cannot cluster an empty graph")
    t0 = time.perf_counter()
    if decomp is None:
        decomp = core_decomposition(G)
    trace = CoreClusterTrace(G.n, decomp.degeneracy, decomposition_time=time.perf_counter() - t0)
    fam = ClusterFamily(G.n)
    k = decomp.degeneracy
    for i in range(k, -1, -1):
        layer = decomp.layers[i]
        if i == k:
            out = SelectOutcome(np.asarray(layer), 0, 0, 0)
        else:
            out = _select(CandidateTriple(G, fam, layer, decomp.coreness, i), params)
        made, t_base = _run_base(G, out.unassigned, base, seed, params, fam, i)
        trace.layers.append(
            LayerRecord(i, len(layer), len(out.unassigned), out.absorbed, out.assigned, out.created + made, t_base)
        )
    trace.total_time = time.perf_counter() - t0
    trace.check_conservation()
    return fam.to_clustering(), trace


def acceleration_stats(trace: CoreClusterTrace) -> dict:
    """Subproblem-size statistics of a run.

    ``rho_G = n / max|S_i|`` and ``mu_G = n / max|V_i|`` over nonempty sets, so
    ``rho_G >= mu_G`` with equality when selection never shrinks the largest
    subproblem.
    """
    sel = [r.selected for r in trace.layers if r.selected > 0]
    lay = [r.layer_size for r in trace.layers if r.layer_size > 0]
    if not lay:
        raise ValueError("trace has no nonempty layers")
    n, k = trace.n, trace.degeneracy
    n_max = max(sel) if sel else 0
    rho_g = n / n_max if n_max else float("inf")
    mu_g = n / max(lay)
    if rho_g < mu_g:
        raise CoreClusterError(f"rho_G={rho_g} < mu_G={mu_g}")
    cost = sum(s**3 for s in sel)
    return {
        "n": n,
        "degeneracy": k,
        "n_max": n_max,
        "max_layer_size": max(lay),
        "rho_G": rho_g,
        "mu_G": mu_g,
        "cost_sum_cubes": cost,
        "cost_bound": (k + 1) * n_max**3,
        "baseline_cost": n**3,
        "predicted_speedup": n**3 / cost if cost else float("inf"),
    }


class CoreCluster:
    """Wrap a base algorithm so that it runs through the core hierarchy."""

    def __init__(self, base: ClusterAlgorithm, params: SelectionParams = SelectionParams()):
        self.base = base
        self.params = params
        self.name = f"corecluster+{getattr(base, 'name', type(base).__name__)}"
        self.last_trace: CoreClusterTrace | None = None

    def cluster(self, G: Graph, seed: int | None = None) -> Clustering:
        cl, self.last_trace = corecluster(G, self.base, self.params, 0 if seed is None else seed)
        return cl
