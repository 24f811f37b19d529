"""One clustering run with timings and metrics, and baseline-vs-CoreCluster benchmarks."""

from __future__ import annotations

import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .algorithms import Clustering, get_algorithm
from .degeneracy import core_decomposition
from .framework import SelectionParams, acceleration_stats, corecluster
from .graph import Graph
from .metrics import conductance_report, modularity, nmi


@dataclass
class RunConfig:
    algo: str = "spectral"
    use_corecluster: bool = False
    seed: int = 0
    rho: int | None = None
    params: SelectionParams = SelectionParams()
    bin_base: float = 2.0


def _base(cfg: RunConfig):
    opts = {"rho": cfg.rho, "seed": cfg.seed} if cfg.algo == "spectral" else {}
    return get_algorithm(cfg.algo, **opts)


def cluster_graph(G: Graph, cfg: RunConfig):
    """Run the configured pipeline; returns ``(clustering, trace or None, timings)``."""
    base = _base(cfg)
    t0 = time.perf_counter()
    if cfg.use_corecluster:
        cl, trace = corecluster(G, base, cfg.params, cfg.seed)
        total = time.perf_counter() - t0
        timings = {
            "decomposition_s": trace.decomposition_time,
            "base_calls_s": [r.base_time for r in trace.layers],
            "total_s": total,
        }
        return cl, trace, timings
    cl = base.cluster(G, cfg.seed)
    total = time.perf_counter() - t0
    return cl, None, {"decomposition_s": 0.0, "base_calls_s": [total], "total_s": total}


def experiment_report(G: Graph, cfg: RunConfig, path: str = "", truth: Clustering | None = None):
    """Cluster ``G`` and build the JSON report described by ``io.REPORT_SCHEMA``."""
    t0 = time.perf_counter()
    decomp = core_decomposition(G)
    t_dec = time.perf_counter() - t0
    cl, trace, timings = cluster_graph(G, cfg)
    if not cfg.use_corecluster:
        timings["decomposition_s"] = t_dec
    cond = conductance_report(G, cl, cfg.bin_base)
    phis = [c["conductance"] for c in cond["clusters"] if not c["excluded"]]
    report = {
        "schema": "corecluster.experiment/1",
        "input": {
            "path": str(path), "n": G.n, "m": G.m,
            "self_loops_dropped": G.self_loops_dropped, "duplicates_dropped": G.duplicates_dropped,
        },
        "algorithm": {
            "name": cfg.algo,
            "corecluster": cfg.use_corecluster,
            "seed": cfg.seed,
            "rho": cfg.rho,
            "alpha": cfg.params.alpha if cfg.use_corecluster else None,
            "beta": cfg.params.beta if cfg.use_corecluster else None,
            "min_cluster_input": cfg.params.min_cluster_input if cfg.use_corecluster else None,
            "span_zero_policy": cfg.params.span_zero_policy.value if cfg.use_corecluster else None,
        },
        "timings": timings,
        "degeneracy": decomp.degeneracy,
        "max_core_coverage": len(decomp.layers[decomp.degeneracy]) / G.n,
        "trace": [
            {k: v for k, v in vars(r).items()} for r in trace.layers
        ] if trace is not None else None,
        "acceleration": acceleration_stats(trace) if trace is not None else None,
        "metrics": {
            "cluster_count": cl.cluster_count,
            "modularity": modularity(G, cl) if G.m else None,
            "nmi": nmi(cl, truth) if truth is not None else None,
            "conductance": {
                "bin_base": cfg.bin_base,
                "excluded_clusters": sum(c["excluded"] for c in cond["clusters"]),
                "mean_conductance": sum(phis) / len(phis) if phis else None,
                "bins": cond["bins"],
            },
        },
    }
    return cl, report


def harness_threads() -> int:
    """Worker cap from ``CORECLUSTER_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("CORECLUSTER_THREADS", "1")))
    except ValueError:
        return 1


def bench_graph(G: Graph, cfg: RunConfig, repeat: int = 3) -> dict:
    """Median wall time of the plain algorithm and of its CoreCluster run."""
    plain = RunConfig(**{**vars(cfg), "use_corecluster": False})
    core = RunConfig(**{**vars(cfg), "use_corecluster": True})
    times = {"baseline": [], "corecluster": []}
    last = {}
    for _ in range(repeat):
        for name, c in (("baseline", plain), ("corecluster", core)):
            t = time.perf_counter()
            cl, _, _ = cluster_graph(G, c)
            times[name].append(time.perf_counter() - t)
            last[name] = cl
    med_b = statistics.median(times["baseline"])
    med_c = statistics.median(times["corecluster"])
    return {
        "n": G.n,
        "m": G.m,
        "algo": cfg.algo,
        "repeat": repeat,
        "baseline_s": times["baseline"],
        "corecluster_s": times["corecluster"],
        "baseline_median_s": med_b,
        "corecluster_median_s": med_c,
        "speedup": med_b / med_c if med_c > 0 else None,
        "agreement_nmi": nmi(last["baseline"], last["corecluster"]),
    }


def bench_many(jobs: list, repeat: int, threads: int | None = None) -> list:
    """Benchmark ``(label, graph, config)`` jobs, at most ``threads`` at a time."""
    threads = threads or harness_threads()

    def one(job):
        label, G, cfg = job
        return {"input": label, **bench_graph(G, cfg, repeat)}

    if threads == 1 or len(jobs) <= 1:
        return [one(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, jobs))
