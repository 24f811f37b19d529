"""Edge-list and clustering file formats, atomic writes and the JSON report schema."""

from __future__ import annotations

import json
import logging
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .algorithms.base import Clustering
from .graph import Graph, GraphError, build_graph

log = logging.getLogger(__name__)


class FormatError(ValueError):
    pass


@contextmanager
def atomic_write(path, mode: str = "w"):
    """Write to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, newline="" if "b" not in mode else None) as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_id(token: str, path, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise FormatError(f"{path}:{lineno}: expected a non-negative integer, got {token!r}") from None
    if value < 0:
        raise FormatError(f"{path}:{lineno}: negative vertex id {value}")
    return value


def read_edge_list(path) -> Graph:
    """Read ``u v`` lines; ``#`` comments and blank lines are skipped."""
    edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 2 vertex ids, got {len(parts)} fields")
            edges.append((_parse_id(parts[0], path, lineno), _parse_id(parts[1], path, lineno)))
    G = build_graph(np.asarray(edges, dtype=np.int64).reshape(-1, 2))
    if G.self_loops_dropped:
        log.warning("%s: dropped %d self-loops", path, G.self_loops_dropped)
    if G.duplicates_dropped:
        log.warning("%s: dropped %d duplicate edges", path, G.duplicates_dropped)
    return G


def write_edge_list(path, G: Graph, header: str | None = None) -> None:
    with atomic_write(path) as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        ext = G.label_map
        for u, v in G.edges().tolist():
            fh.write(f"{ext[u]} {ext[v]}\n")


def read_clustering_file(path) -> dict:
    """``vertex<TAB>cluster`` lines -> {external vertex id: cluster token}."""
    out: dict = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'vertex<TAB>cluster'")
            v = _parse_id(parts[0], path, lineno)
            if v in out and out[v] != parts[1]:
                raise FormatError(f"{path}:{lineno}: vertex {v} listed with clusters {out[v]!r} and {parts[1]!r}")
            out[v] = parts[1]
    return out


def clustering_for_graph(assignment: dict, G: Graph, source="clustering") -> Clustering:
    """Align an external-id assignment with the internal ids of ``G``."""
    index = G.internal_ids()
    unknown = [v for v in assignment if v not in index]
    if unknown:
        raise FormatError(f"{source}: vertex {unknown[0]} is not in the graph ({len(unknown)} unknown)")
    if len(assignment) != G.n:
        missing = next(G.external_id(i) for i in range(G.n) if G.external_id(i) not in assignment)
        raise FormatError(f"{source}: vertex {missing} has no cluster ({G.n - len(assignment)} missing)")
    tokens = [None] * G.n
    for v, c in assignment.items():
        tokens[index[v]] = c
    return Clustering.from_labels(np.asarray(tokens, dtype=object).astype(str))


def align_clusterings(a: dict, b: dict) -> tuple[Clustering, Clustering]:
    """Two external-id assignments over the same vertex set, as aligned clusterings."""
    if a.keys() != b.keys():
        only = next(iter(a.keys() ^ b.keys()))
        raise FormatError(f"clusterings cover different vertex sets (e.g. vertex {only})")
    keys = sorted(a)
    return (
        Clustering.from_labels(np.asarray([a[k] for k in keys], dtype=str)),
        Clustering.from_labels(np.asarray([b[k] for k in keys], dtype=str)),
    )


def read_clustering(path, G: Graph | None = None):
    """Read a clustering file; aligned to ``G`` when given, else sorted by vertex id.

    Without a graph returns ``(vertex_ids, Clustering)``.
    """
    assignment = read_clustering_file(path)
    if G is not None:
        return clustering_for_graph(assignment, G, str(path))
    keys = sorted(assignment)
    return np.asarray(keys, dtype=np.int64), Clustering.from_labels(np.asarray([assignment[k] for k in keys], dtype=str))


def write_clustering(path, clustering: Clustering, vertex_ids=None) -> None:
    """Write ``vertex<TAB>cluster`` lines in vertex order.

    ``vertex_ids`` (e.g. ``G.label_map``) gives the external id of each
    position; defaults to ``0..n-1``.
    """
    ids = np.arange(len(clustering)) if vertex_ids is None else np.asarray(vertex_ids)
    if len(ids) != len(clustering):
        raise FormatError("vertex id list and clustering differ in length")
    with atomic_write(path) as fh:
        fh.write(format_clustering(clustering, ids))


def format_clustering(clustering: Clustering, vertex_ids) -> str:
    return "".join(f"{v}\t{c}\n" for v, c in zip(np.asarray(vertex_ids).tolist(), clustering.labels.tolist()))


def write_tsv(path, header: list[str], rows, comments: list[str] = ()) -> None:
    with atomic_write(path) as fh:
        fh.write(format_tsv(header, rows, comments))


def _cell(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, bool | np.bool_):
        return "1" if x else "0"
    if isinstance(x, float | np.floating):
        return f"{float(x):.10g}"
    return str(x)


def format_tsv(header: list[str], rows, comments: list[str] = ()) -> str:
    lines = ["# " + "\t".join(header)]
    lines += ["\t".join(_cell(x) for x in row) for row in rows]
    lines += [f"# {c}" for c in comments]
    return "\n".join(lines) + "\n"


def dump_json(path, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if path is None or str(path) == "-":
        print(text, end="")
        return
    with atomic_write(path) as fh:
        fh.write(text)


_num = {"type": "number"}
_int = {"type": "integer"}
_opt_num = {"type": ["number", "null"]}
_opt_int = {"type": ["integer", "null"]}


def _obj(props: dict, required=None) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": list(props) if required is None else required,
        "additionalProperties": False,
    }


LAYER_SCHEMA = _obj({
    "rank": _int, "layer_size": _int, "selected": _int, "absorbed": _int,
    "assigned": _int, "clusters_created": _int, "base_time": _num,
})

BIN_SCHEMA = _obj({
    "bin": _int, "size_low": _num, "size_high": _num, "count": _int,
    "included": _int, "mean_size": _num, "mean_conductance": _opt_num,
})

ACCELERATION_SCHEMA = _obj({
    "n": _int, "degeneracy": _int, "n_max": _int, "max_layer_size": _int, "rho_G": _num,
    "mu_G": _num, "cost_sum_cubes": _int, "cost_bound": _int, "baseline_cost": _int,
    "predicted_speedup": _num,
})

#: JSON Schema of the report written by ``corecluster cluster --report``.
REPORT_SCHEMA = _obj({
    "schema": {"const": "corecluster.experiment/1"},
    "input": _obj({
        "path": {"type": "string"}, "n": _int, "m": _int,
        "self_loops_dropped": _int, "duplicates_dropped": _int,
    }),
    "algorithm": _obj({
        "name": {"type": "string"}, "corecluster": {"type": "boolean"}, "seed": _int, "rho": _opt_int,
        "alpha": _opt_num, "beta": _opt_int, "min_cluster_input": _opt_int,
        "span_zero_policy": {"type": ["string", "null"]},
    }),
    "timings": _obj({
        "decomposition_s": _num, "base_calls_s": {"type": "array", "items": _num}, "total_s": _num,
    }),
    "degeneracy": _int,
    "max_core_coverage": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
    "trace": {"oneOf": [{"type": "null"}, {"type": "array", "items": LAYER_SCHEMA}]},
    "acceleration": {"oneOf": [{"type": "null"}, ACCELERATION_SCHEMA]},
    "metrics": _obj({
        "cluster_count": _int,
        "modularity": _opt_num,
        "nmi": _opt_num,
        "conductance": _obj({
            "bin_base": _num, "excluded_clusters": _int, "mean_conductance": _opt_num,
            "bins": {"type": "array", "items": BIN_SCHEMA},
        }),
    }),
})


def check_report(report: dict, schema: dict = REPORT_SCHEMA, where: str = "report") -> None:
    """Minimal structural validation (types, required and unknown keys).

    Enough to keep emitted reports on the documented schema without a
    runtime dependency on a JSON-Schema library.
    """
    if "const" in schema:
        if report != schema["const"]:
            raise FormatError(f"{where}: expected {schema['const']!r}")
        return
    if "oneOf" in schema:
        errors = []
        for sub in schema["oneOf"]:
            try:
                check_report(report, sub, where)
                return
            except FormatError as exc:
                errors.append(str(exc))
        raise FormatError("; ".join(errors))
    types = schema.get("type")
    types = [types] if isinstance(types, str) else list(types or [])
    ok = {
        "object": lambda x: isinstance(x, dict),
        "array": lambda x: isinstance(x, list),
        "string": lambda x: isinstance(x, str),
        "boolean": lambda x: isinstance(x, bool),
        "integer": lambda x: isinstance(x, int) and not isinstance(x, bool),
        "number": lambda x: isinstance(x, int | float) and not isinstance(x, bool),
        "null": lambda x: x is None,
    }
    if types and not any(ok[t](report) for t in types):
        raise FormatError(f"{where}: expected {'/'.join(types)}, got {type(report).__name__}")
    if isinstance(report, dict) and "properties" in schema:
        props = schema["properties"]
        extra = set(report) - set(props)
        if extra:
            raise FormatError(f"{where}: unknown keys {sorted(extra)}")
        missing = set(schema.get("required", ())) - set(report)
        if missing:
            raise FormatError(f"{where}: missing keys {sorted(missing)}")
        for key, sub in props.items():
            if key in report:
                check_report(report[key], sub, f"{where}.{key}")
    if isinstance(report, list) and "items" in schema:
        for i, item in enumerate(report):
            check_report(item, schema["items"], f"{where}[{i}]")


__all__ = [
    "FormatError",
    "GraphError",
    "REPORT_SCHEMA",
    "align_clusterings",
    "atomic_write",
    "check_report",
    "clustering_for_graph",
    "dump_json",
    "format_clustering",
    "format_tsv",
    "read_clustering",
    "read_clustering_file",
    "read_edge_list",
    "write_clustering",
    "write_edge_list",
    "write_tsv",
]
