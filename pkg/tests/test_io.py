import json

import numpy as np
import pytest

from conftest import two_k5
from corecluster.algorithms import Clustering
from corecluster.io import (
    REPORT_SCHEMA,
    FormatError,
    align_clusterings,
    atomic_write,
    check_report,
    clustering_for_graph,
    dump_json,
    format_tsv,
    read_clustering,
    read_clustering_file,
    read_edge_list,
    write_clustering,
    write_edge_list,
)
from corecluster.graph import build_graph
from corecluster.experiment import RunConfig, experiment_report


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_path_graph(tmp_path):
    G = read_edge_list(write(tmp_path, "g", "0 1\n1 2\n"))
    assert (G.n, G.m) == (3, 2)


def test_comment_and_external_ids(tmp_path):
    G = read_edge_list(write(tmp_path, "g", "# comment\n\n3 7\n"))
    assert G.m == 1 and G.label_map.tolist() == [3, 7]


def test_dirty_file_warns(tmp_path, caplog):
    G = read_edge_list(write(tmp_path, "g", "0 1\n1 0\n2 2\n1 2\n"))
    assert (G.m, G.self_loops_dropped, G.duplicates_dropped) == (2, 1, 1)
    assert "1 self-loops" in caplog.text and "1 duplicate" in caplog.text


@pytest.mark.parametrize("text,line", [("0 1\n1 x\n", 2), ("0 1 2\n", 1), ("-3 1\n", 1)])
def test_bad_lines_report_line_number(tmp_path, text, line):
    with pytest.raises(FormatError, match=f":{line}:"):
        read_edge_list(write(tmp_path, "g", text))


def test_empty_file(tmp_path):
    assert read_edge_list(write(tmp_path, "g", "")).n == 0


def test_edge_list_round_trip(tmp_path):
    G = build_graph([(10, 20), (20, 30), (5, 10)])
    write_edge_list(tmp_path / "e", G, "hello")
    H = read_edge_list(tmp_path / "e")
    assert np.array_equal(H.label_map, G.label_map) and np.array_equal(H.edges(), G.edges())


def test_write_clustering_format(tmp_path):
    write_clustering(tmp_path / "c", Clustering(np.array([0, 0, 1])))
    assert (tmp_path / "c").read_text() == "0\t0\n1\t0\n2\t1\n"
    ids, cl = read_clustering(tmp_path / "c")
    assert ids.tolist() == [0, 1, 2] and cl.labels.tolist() == [0, 0, 1]


def test_clustering_round_trip_with_graph(tmp_path):
    G = build_graph([(10, 20), (20, 30), (40, 50)])
    cl = Clustering(np.array([0, 0, 0, 1, 1]))
    write_clustering(tmp_path / "c", cl, G.label_map)
    assert read_clustering(tmp_path / "c", G) == cl


def test_clustering_errors(tmp_path):
    with pytest.raises(FormatError, match="listed with clusters"):
        read_clustering_file(write(tmp_path, "c", "0\ta\n0\tb\n"))
    G = build_graph([(0, 1)])
    with pytest.raises(FormatError, match="not in the graph"):
        clustering_for_graph({0: "a", 1: "a", 5: "b"}, G)
    with pytest.raises(FormatError, match="no cluster"):
        clustering_for_graph({0: "a"}, G)
    with pytest.raises(FormatError):
        align_clusterings({0: "a"}, {1: "a"})


def test_atomic_write_leaves_nothing_on_failure(tmp_path):
    target = tmp_path / "out"
    target.write_text("old")
    with pytest.raises(RuntimeError):
        with atomic_write(target) as fh:
            fh.write("partial")
            raise RuntimeError("interrupted")
    assert target.read_text() == "old"
    assert [p.name for p in tmp_path.iterdir()] == ["out"]


def test_tsv_cells():
    text = format_tsv(["a", "b", "c", "d"], [(1, 0.5, True, None)], ["note"])
    assert text == "# a\tb\tc\td\n1\t0.5\t1\tNA\n# note\n"


def test_json_rejects_nan(tmp_path):
    with pytest.raises(ValueError):
        dump_json(tmp_path / "x.json", {"a": float("nan")})


@pytest.mark.parametrize("use_core", [False, True])
def test_report_validates(use_core):
    jsonschema = pytest.importorskip("jsonschema")
    G = two_k5(bridge=True)
    _, report = experiment_report(G, RunConfig("multilevel", use_core), "g.edges",
                                  Clustering(np.repeat([0, 1], 5)))
    report = json.loads(json.dumps(report))
    jsonschema.validate(report, REPORT_SCHEMA)
    check_report(report)
    assert 0 < report["max_core_coverage"] <= 1
    assert report["timings"]["total_s"] >= 0 and min(report["timings"]["base_calls_s"]) >= 0


def test_check_report_rejects_unknown_keys():
    _, report = experiment_report(two_k5(), RunConfig("spectral", True))
    report["extra"] = 1
    with pytest.raises(FormatError, match="unknown keys"):
        check_report(report)
