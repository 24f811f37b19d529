#!/usr/bin/env python3
"""Time the compiled and pure-Python kernels against each other.

Usage:
  python3 benchmarks/bench_kernels.py [--n 20000] [--avg-deg 12] [--repeat 5]

Prints one row per kernel with the median time of every available backend
and the speedup of the compiled one. Both backends run on identical inputs
and their outputs are checked for equality before timing.
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from corecluster.benchgen import GeneratorParams, generate
from corecluster.degeneracy import core_decomposition
from corecluster.kernels import available_backends


def _median_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return statistics.median(times)


def _cases(G, seed):
    rng = np.random.default_rng(seed)
    d = core_decomposition(G)
    core = d.coreness
    level = d.degeneracy // 2
    labels = np.full(G.n, -1, dtype=np.int64)
    top = np.flatnonzero(core > level)
    n_clusters = 8
    labels[top] = rng.integers(0, n_clusters, size=len(top))
    sizes = np.bincount(labels[top], minlength=n_clusters).astype(np.int64)
    pending = np.flatnonzero(core == level).astype(np.int64)

    A = G.adjacency_matrix().astype(np.float64).tocsr()
    node_w = np.asarray(A.sum(1)).ravel()
    order = rng.permutation(G.n).astype(np.int64)
    m2 = float(node_w.sum())

    def core_numbers(mod):
        return mod.core_numbers(G.indptr, G.indices)

    def absorb(mod):
        lab = labels.copy()
        return mod.absorb(G.indptr, G.indices, core, level, lab, n_clusters, pending, 0.7, 2), lab

    def spans(mod):
        return mod.spans(G.indptr, G.indices, core, level, labels, sizes, pending)

    def local_move(mod):
        comm = np.arange(G.n, dtype=np.int64)
        tot = node_w.copy()
        moves = mod.local_move(A.indptr.astype(np.int64), A.indices.astype(np.int64), A.data, node_w,
                               comm, tot, order, m2, 1)
        return moves, comm

    return {"core_numbers": core_numbers, "absorb": absorb, "spans": spans, "local_move": local_move}


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--min-deg", type=int, default=4)
    ap.add_argument("--max-deg", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    G, _, _ = generate(GeneratorParams(args.n, args.min_deg, args.max_deg, 0.1, seed=args.seed))
    backends = available_backends()
    cases = _cases(G, args.seed)
    print(f"graph n={G.n} m={G.m}; backends: {', '.join(backends)}")
    print(f"{'kernel':<14}" + "".join(f"{name + ' [s]':>16}" for name in backends) + f"{'speedup':>10}")
    for name, fn in cases.items():
        outs = {b: fn(mod) for b, mod in backends.items()}
        ref = outs["python"]
        for b, out in outs.items():
            if not _same(out, ref):
                raise SystemExit(f"{name}: backend {b} disagrees with python")
        times = {b: _median_time(lambda m=mod: fn(m), args.repeat) for b, mod in backends.items()}
        ratio = times["python"] / times["cython"] if "cython" in times and times["cython"] > 0 else float("nan")
        print(f"{name:<14}" + "".join(f"{t:>16.5f}" for t in times.values()) + f"{ratio:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
