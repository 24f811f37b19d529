"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 computational or input error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .algorithms import ALGORITHMS, CapacityError, ClusteringError
from .analysis import cc_vs_core_profile, degeneracy_cc_bound_check, transition_reports
from .benchgen import GeneratorError, GeneratorParams, generate
from .degeneracy import core_decomposition
from .experiment import RunConfig, bench_many, experiment_report
from .framework import CoreClusterError, SelectionParams, SpanZeroPolicy
from .graph import GraphError
from .io import (
    FormatError,
    atomic_write,
    align_clusterings,
    clustering_for_graph,
    dump_json,
    format_clustering,
    format_tsv,
    read_clustering,
    read_clustering_file,
    read_edge_list,
    write_clustering,
    write_edge_list,
)
from .metrics import MetricError, conductance_report, nmi

EXIT_USAGE = 1
EXIT_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out) -> None:
    if out:
        with atomic_write(out) as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _selection(args) -> SelectionParams:
    return SelectionParams(args.alpha, args.beta, args.min_cluster_input, args.span_zero_policy)


def cmd_decompose(args) -> int:
    G = read_edge_list(args.edges)
    d = core_decomposition(G)
    summary = [f"degeneracy\t{d.degeneracy}"] + [f"layer\t{i}\t{len(d.layers[i])}" for i in range(d.degeneracy, -1, -1)]
    rows = zip(G.label_map.tolist(), d.coreness.tolist())
    tsv = format_tsv(["vertex", "coreness"], rows)
    if args.output:
        _emit(tsv, args.output)
        print("\n".join(summary))
    else:
        sys.stdout.write("".join(f"# {s}\n" for s in summary) + tsv)
    return 0


def cmd_cluster(args) -> int:
    G = read_edge_list(args.edges)
    truth = read_clustering(args.truth, G) if args.truth else None
    cfg = RunConfig(args.algo, args.corecluster, args.seed, args.rho, _selection(args), args.bin_base)
    cl, report = experiment_report(G, cfg, args.edges, truth)
    text = format_clustering(cl, G.label_map)
    if args.output:
        write_clustering(args.output, cl, G.label_map)
    else:
        sys.stdout.write(text)
    if args.report:
        dump_json(args.report, report)
    m = report["metrics"]
    msg = f"clusters {m['cluster_count']}"
    if m["nmi"] is not None:
        msg += f"  nmi {m['nmi']:.6f}"
    print(msg, file=sys.stderr)
    return 0


def cmd_generate(args) -> int:
    sizes = None
    if args.sizes:
        sizes = tuple(int(x) for x in args.sizes.split(","))
    elif args.communities:
        c = args.communities
        sizes = tuple(args.n // c + (1 if j < args.n % c else 0) for j in range(c))
    params = GeneratorParams(args.n, args.min_deg, args.max_deg, args.mu, sizes, args.seed)
    G, truth, stats = generate(params)
    header = f"planted partition n={args.n} min_d={args.min_deg} max_d={args.max_deg} mu={args.mu} seed={args.seed}"
    write_edge_list(f"{args.output}.edges", G, header)
    write_clustering(f"{args.output}.truth", truth, G.label_map)
    print(f"edges {stats.edges}  inter {stats.inter_edges}  mu_realized {stats.mu_realized:.4f}"
          f"  unmatched_stubs {stats.unmatched_stubs}")
    if args.report:
        dump_json(args.report, stats.to_dict())
    return 0


def cmd_evaluate_nmi(args) -> int:
    truth, pred = align_clusterings(read_clustering_file(args.truth), read_clustering_file(args.pred))
    value = nmi(pred, truth)
    print(f"{value:.6f}")
    if args.report:
        dump_json(args.report, {"nmi": value, "n": len(truth),
                                "truth_clusters": truth.cluster_count, "pred_clusters": pred.cluster_count})
    return 0


def cmd_evaluate_conductance(args) -> int:
    G = read_edge_list(args.edges)
    cl = clustering_for_graph(read_clustering_file(args.pred), G, args.pred)
    rep = conductance_report(G, cl, args.bin_base)
    rows = [(b["bin"], b["size_low"], b["size_high"], b["count"], b["included"], b["mean_size"], b["mean_conductance"])
            for b in rep["bins"]]
    sys.stdout.write(format_tsv(
        ["bin", "size_low", "size_high", "count", "included", "mean_size", "mean_conductance"], rows))
    if args.report:
        dump_json(args.report, rep)
    return 0


def cmd_cc_profile(args) -> int:
    G = read_edge_list(args.edges)
    prof = cc_vs_core_profile(G, core_decomposition(G))
    rows = [(p["x"], p["cc_induced"], p["cc_original"], p["rank"], p["core_size"]) for p in prof]
    _emit(format_tsv(["x", "cc_induced", "cc_original", "rank", "core_size"], rows), args.output)
    return 0


def cmd_transitions(args) -> int:
    G = read_edge_list(args.edges)
    reps = transition_reports(G, core_decomposition(G), args.rho)
    cols = ["rank", "n_outer", "n_inner", "delta_edges", "j_edges", "j_entries", "rho", "eigengap",
            "measured_f", "bound_f", "measured_2", "bound_2", "applicable", "holds_f", "holds_2"]
    rows, findings = [], []
    for r in reps:
        d = r.to_dict()
        rows.append([d[c] for c in cols])
        if r.applicable and not (r.holds_f and r.holds_2):
            findings.append(f"finding: rank {r.rank} bound violated"
                            f" (F {r.measured_f:.4g} vs {r.bound_f:.4g}, 2 {r.measured_2:.4g} vs {r.bound_2:.4g})")
        elif not r.applicable:
            findings.append(f"inapplicable: rank {r.rank}: {r.reason}")
    _emit(format_tsv(cols, rows, findings), args.output)
    return 0


def cmd_cc_bound(args) -> int:
    G = read_edge_list(args.edges)
    res = degeneracy_cc_bound_check(G)
    for key in ("degeneracy", "d_max", "n", "gamma", "sum_cc", "rhs", "holds"):
        val = res[key]
        print(f"{key}\t{val:.10g}" if isinstance(val, float) else f"{key}\t{val}")
    if not res["holds"]:
        print("# finding: degeneracy below gamma * sum of local clustering coefficients")
    return 0


def cmd_bench(args) -> int:
    cfg = RunConfig(args.algo, False, args.seed, args.rho, _selection(args))
    jobs = [(path, read_edge_list(path), cfg) for path in args.edges]
    results = bench_many(jobs, args.repeat)
    dump_json(args.report or "-", {"repeat": args.repeat, "results": results})
    return 0


def _add_selection(p) -> None:
    p.add_argument("--alpha", type=float, default=0.7, help="neighbour-majority threshold in (0.5, 1]")
    p.add_argument("--beta", type=int, default=2, help="minimum in-core degree to absorb a vertex")
    p.add_argument("--min-cluster-input", type=int, default=3,
                   help="smallest leftover set handed to the base algorithm")
    p.add_argument("--span-zero-policy", choices=[p.value for p in SpanZeroPolicy],
                   default=SpanZeroPolicy.SINGLETON_COMPONENTS.value)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rho", type=int, default=None, help="force the spectral cluster count")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="corecluster", description="Clustering along the k-core hierarchy.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", help="coreness of every vertex")
    p.add_argument("edges")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("cluster", help="cluster a graph")
    p.add_argument("edges")
    p.add_argument("--algo", choices=sorted(ALGORITHMS), default="spectral")
    p.add_argument("--corecluster", action="store_true", help="run through the core hierarchy")
    _add_selection(p)
    p.add_argument("--truth", help="ground-truth clustering for NMI in the report")
    p.add_argument("--bin-base", type=float, default=2.0)
    p.add_argument("-o", "--output")
    p.add_argument("--report")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("generate", help="planted-partition benchmark graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--min-deg", type=int, required=True)
    p.add_argument("--max-deg", type=int, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--communities", type=int, help="number of equal communities")
    group.add_argument("--sizes", help="comma-separated community sizes")
    p.add_argument("-o", "--output", required=True, help="output prefix")
    p.add_argument("--report")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="clustering quality")
    ev = p.add_subparsers(dest="metric", required=True, parser_class=_Parser)
    q = ev.add_parser("nmi")
    q.add_argument("truth")
    q.add_argument("pred")
    q.add_argument("--report")
    q.set_defaults(func=cmd_evaluate_nmi)
    q = ev.add_parser("conductance")
    q.add_argument("edges")
    q.add_argument("pred")
    q.add_argument("--bin-base", type=float, default=2.0)
    q.add_argument("--report")
    q.set_defaults(func=cmd_evaluate_conductance)

    p = sub.add_parser("analyze", help="diagnostics on the core hierarchy")
    an = p.add_subparsers(dest="study", required=True, parser_class=_Parser)
    q = an.add_parser("cc-profile")
    q.add_argument("edges")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_cc_profile)
    q = an.add_parser("transitions")
    q.add_argument("edges")
    q.add_argument("--rho", type=int, default=None)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_transitions)
    q = an.add_parser("cc-bound")
    q.add_argument("edges")
    q.set_defaults(func=cmd_cc_bound)

    p = sub.add_parser("bench", help="time baseline against CoreCluster")
    p.add_argument("edges", nargs="+")
    p.add_argument("--algo", choices=sorted(ALGORITHMS), default="spectral")
    p.add_argument("--repeat", type=int, default=3)
    _add_selection(p)
    p.add_argument("--report")
    p.set_defaults(func=cmd_bench)
    return parser


COMPUTE_ERRORS = (
    GraphError, FormatError, ClusteringError, CapacityError, CoreClusterError,
    GeneratorError, MetricError, ValueError, OSError, RuntimeError,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except COMPUTE_ERRORS as exc:
        print(f"corecluster: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
