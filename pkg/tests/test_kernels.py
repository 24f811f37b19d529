"""Every kernel backend must agree with the pure-Python reference bit for bit."""

import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import gnp
from corecluster import kernels
from corecluster.kernels import available_backends

BACKENDS = available_backends()


def test_selected_backend_is_known():
    assert kernels.BACKEND in BACKENDS


@pytest.fixture(params=sorted(BACKENDS))
def mod(request):
    return BACKENDS[request.param]


def _state(seed):
    rng = np.random.default_rng(seed)
    G = gnp(int(rng.integers(5, 120)), float(rng.uniform(0.02, 0.3)), rng)
    core = BACKENDS["python"].core_numbers(G.indptr, G.indices)
    level = int(rng.integers(0, core.max() + 1)) if G.n else 0
    nc = int(rng.integers(1, 6))
    labels = np.where(rng.random(G.n) < 0.5, rng.integers(0, nc, G.n), -1).astype(np.int64)
    sizes = np.bincount(labels[labels >= 0], minlength=nc).astype(np.int64)
    pending = np.flatnonzero(labels < 0).astype(np.int64)
    return G, core, level, labels, nc, sizes, pending, rng


@pytest.mark.parametrize("seed", range(15))
def test_core_numbers(mod, seed):
    G, *_ = _state(seed)
    ref = BACKENDS["python"].core_numbers(G.indptr, G.indices)
    assert np.array_equal(mod.core_numbers(G.indptr, G.indices), ref)


@pytest.mark.parametrize("seed", range(15))
def test_absorb(mod, seed):
    G, core, level, labels, nc, sizes, pending, _ = _state(seed)
    a, b = labels.copy(), labels.copy()
    out_ref = BACKENDS["python"].absorb(G.indptr, G.indices, core, level, a, nc, pending, 0.6, 2)
    out = mod.absorb(G.indptr, G.indices, core, level, b, nc, pending, 0.6, 2)
    assert np.array_equal(out, out_ref) and np.array_equal(a, b)


@pytest.mark.parametrize("seed", range(15))
def test_spans(mod, seed):
    G, core, level, labels, nc, sizes, pending, _ = _state(seed)
    ref = BACKENDS["python"].spans(G.indptr, G.indices, core, level, labels, sizes, pending)
    got = mod.spans(G.indptr, G.indices, core, level, labels, sizes, pending)
    assert np.array_equal(got[0], ref[0]) and np.array_equal(got[1], ref[1])


@pytest.mark.parametrize("seed", range(10))
def test_local_move(mod, seed):
    G, *_, rng = _state(seed)
    if G.m == 0:
        return
    A = G.adjacency_matrix().tocsr()
    w = A.data * rng.integers(1, 4, size=A.nnz)
    A.data = w
    A = ((A + A.T) / 2).tocsr()
    kw = np.asarray(A.sum(1)).ravel()
    order = rng.permutation(G.n).astype(np.int64)
    results = []
    for m in (BACKENDS["python"], mod):
        comm = np.arange(G.n, dtype=np.int64)
        tot = kw.copy()
        moves = m.local_move(A.indptr.astype(np.int64), A.indices.astype(np.int64), A.data.astype(np.float64),
                             kw, comm, tot, order, float(kw.sum()), 50)
        results.append((moves, comm, tot))
    assert results[0][0] == results[1][0]
    assert np.array_equal(results[0][1], results[1][1])
    assert np.array_equal(results[0][2], results[1][2])


def test_empty_inputs(mod):
    ptr = np.zeros(1, dtype=np.int64)
    idx = np.zeros(0, dtype=np.int64)
    assert mod.core_numbers(ptr, idx).size == 0


def test_pure_python_fallback_selected_by_env():
    code = ("from corecluster import kernels, corecluster, SpectralClustering, build_graph\n"
            "G = build_graph([(0, 1), (1, 2), (2, 0), (2, 3)])\n"
            "cl, _ = corecluster(G, SpectralClustering())\n"
            "print(kernels.BACKEND, cl.cluster_count)\n")
    env = {**os.environ, "CORECLUSTER_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split()[0] == "python"
