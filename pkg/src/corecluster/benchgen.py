"""Planted-partition benchmark graphs parameterised by (n, min_d, max_d, mu).

Each vertex draws a target degree uniformly from ``[min_d, max_d]``; a
``1 - mu`` share of its stubs is matched inside its community and the rest
across communities, by seeded configuration-model matching. Self-loops and
repeated edges are rejected and re-drawn for a bounded number of rounds;
stubs still unmatched after that are dropped and counted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algorithms.base import Clustering
from .graph import Graph, build_graph

MAX_UNMATCHED_FRACTION = 0.10
MATCH_ROUNDS = 50


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorParams:
    n: int
    min_d: int
    max_d: int
    mu: float
    community_sizes: tuple | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise GeneratorError("need at least 2 vertices")
        if not 1 <= self.min_d <= self.max_d < self.n:
            raise GeneratorError(f"need 1 <= min_d <= max_d < n, got {self.min_d}, {self.max_d}, {self.n}")
        if not 0.0 <= self.mu < 1.0:
            raise GeneratorError(f"mu must lie in [0, 1), got {self.mu}")
        if self.community_sizes is not None:
            sizes = tuple(int(s) for s in self.community_sizes)
            if sum(sizes) != self.n or min(sizes) < 1:
                raise GeneratorError(f"community sizes must be positive and sum to n={self.n}")
            object.__setattr__(self, "community_sizes", sizes)

    def sizes(self) -> tuple:
        if self.community_sizes is not None:
            return self.community_sizes
        return auto_community_sizes(self.n)


def auto_community_sizes(n: int) -> tuple:
    """``max(2, round(n / 125))`` communities of (nearly) equal size."""
    c = min(max(2, round(n / 125)), n)
    base, extra = divmod(n, c)
    return tuple(base + 1 if j < extra else base for j in range(c))


@dataclass
class GeneratorStats:
    target_stubs: int
    unmatched_stubs: int
    edges: int
    inter_edges: int
    mu_target: float
    mu_realized: float
    mu_edge_fraction: float
    community_sizes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _match(stubs: np.ndarray, rng, community=None, existing=None) -> tuple[list, int]:
    """Pair stubs at random, rejecting loops, repeats and (if ``community`` is
    given) same-community pairs. Returns ``(edges, unmatched_count)``."""
    seen = existing if existing is not None else set()
    edges = []
    pool = stubs
    for _ in range(MATCH_ROUNDS):
        if len(pool) < 2:
            break
        pool = rng.permutation(pool)
        if len(pool) % 2:
            odd, pool = pool[-1:], pool[:-1]
        else:
            odd = pool[:0]
        left = []
        for u, v in pool.reshape(-1, 2).tolist():
            key = (u, v) if u < v else (v, u)
            if u == v or key in seen or (community is not None and community[u] == community[v]):
                left.extend((u, v))
                continue
            seen.add(key)
            edges.append(key)
        pool = np.concatenate([np.asarray(left, dtype=np.int64), odd])
        if not left:
            break
    return edges, len(pool)


def generate(params: GeneratorParams) -> tuple[Graph, Clustering, GeneratorStats]:
    """Sample a benchmark graph and its ground-truth communities."""
    sizes = params.sizes()
    for s in sizes:
        if s <= params.max_d * (1.0 - params.mu):
            raise GeneratorError(
                f"community of size {s} cannot host internal degree up to {params.max_d * (1 - params.mu):.1f}; "
                "use fewer, larger communities or a smaller max_d"
            )
    rng = np.random.default_rng(params.seed)
    n = params.n
    community = np.repeat(np.arange(len(sizes)), sizes)
    deg = rng.integers(params.min_d, params.max_d + 1, size=n)
    k_in = np.ceil((1.0 - params.mu) * deg - 1e-12).astype(np.int64)
    k_out = deg - k_in

    seen: set = set()
    edges: list = []
    unmatched = 0
    start = 0
    for s in sizes:
        block = np.arange(start, start + s)
        stubs = np.repeat(block, k_in[block])
        e, left = _match(stubs, rng, existing=seen)
        edges += e
        unmatched += left
        start += s
    e, left = _match(np.repeat(np.arange(n), k_out), rng, community=community, existing=seen)
    edges += e
    unmatched += left

    total = int(deg.sum())
    if unmatched > MAX_UNMATCHED_FRACTION * total:
        raise GeneratorError(
            f"could not match {unmatched} of {total} stubs ({unmatched / total:.1%}); "
            "the degree range is too dense for the community sizes"
        )
    G = build_graph(np.asarray(edges, dtype=np.int64).reshape(-1, 2), vertices=range(n))
    truth = Clustering(community.astype(np.int64))

    e_arr = G.edges()
    cross = community[e_arr[:, 0]] != community[e_arr[:, 1]]
    rows = np.repeat(np.arange(n), G.degrees)
    ext = np.bincount(rows, weights=(community[rows] != community[G.indices]), minlength=n)
    has = G.degrees > 0
    stats = GeneratorStats(
        target_stubs=total,
        unmatched_stubs=unmatched,
        edges=G.m,
        inter_edges=int(cross.sum()),
        mu_target=params.mu,
        mu_realized=float((ext[has] / G.degrees[has]).mean()) if has.any() else 0.0,
        mu_edge_fraction=float(cross.mean()) if G.m else 0.0,
        community_sizes=list(sizes),
    )
    return G, truth, stats
