import numpy as np
import pytest

from conftest import clique, complete_edges, gnp, modularity_by_pairs, set_partitions, two_k5
from corecluster.algorithms import (
    CapacityError,
    Clustering,
    ClusteringError,
    SpectralConfig,
    eigengap_cluster_count,
    fast_greedy_modularity,
    get_algorithm,
    kmeans_pp,
    multilevel_modularity,
    normalized_laplacian,
    spectral_cluster,
)
from corecluster.algorithms.spectral import wcss
from corecluster.benchgen import GeneratorParams, generate
from corecluster.graph import build_graph, connected_components
from corecluster.metrics import modularity, nmi


def same_partition(a, b):
    return Clustering.from_labels(np.asarray(a)) == Clustering.from_labels(np.asarray(b))


# -- Clustering type ---------------------------------------------------------------

def test_clustering_validation():
    with pytest.raises(ClusteringError):
        Clustering(np.array([0, 2]))
    with pytest.raises(ClusteringError):
        Clustering(np.array([-1, 0]))
    c = Clustering.from_labels(["b", "a", "b"])
    assert c.labels.tolist() == [0, 1, 0] and c.cluster_count == 2
    assert [x.tolist() for x in c.clusters()] == [[0, 2], [1]]


def test_registry():
    assert get_algorithm("spectral", rho=3).config.rho == 3
    assert get_algorithm("multilevel").name == "multilevel"
    with pytest.raises(ValueError):
        get_algorithm("infomap")


# -- Laplacian and eigengap ----------------------------------------------------------

def test_laplacian_k2():
    L = normalized_laplacian(build_graph([(0, 1)]))
    assert np.allclose(L, [[1, -1], [-1, 1]])


def test_laplacian_isolated_vertex():
    assert normalized_laplacian(build_graph([], vertices=[0])).tolist() == [[0.0]]


def test_laplacian_triangle():
    L = normalized_laplacian(build_graph([(0, 1), (1, 2), (2, 0)]))
    assert np.allclose(np.diag(L), 1.0)
    assert np.allclose(L[~np.eye(3, dtype=bool)], -0.5)


def test_laplacian_spectrum_range(rng):
    for _ in range(20):
        G = gnp(int(rng.integers(2, 60)), 0.1, rng)
        L = normalized_laplacian(G)
        assert np.array_equal(L, L.T)
        ev = np.linalg.eigvalsh(L)
        assert ev.min() >= -1e-9 and ev.max() <= 2 + 1e-9


def test_laplacian_capacity():
    with pytest.raises(CapacityError):
        normalized_laplacian(clique(5), dense_solver_limit=4)


@pytest.mark.parametrize("vals,expected", [([0, 0, 0.8, 0.9], 2), ([0, 1, 1, 1], 1)])
def test_eigengap(vals, expected):
    assert eigengap_cluster_count(vals) == expected


def test_eigengap_two_k5():
    vals = np.linalg.eigvalsh(normalized_laplacian(two_k5()))
    assert eigengap_cluster_count(vals) == 2


# -- k-means++ -----------------------------------------------------------------------

def test_kmeans_rho_equals_n(rng):
    pts = rng.normal(size=(7, 2))
    lab = kmeans_pp(pts, 7)
    assert len(set(lab.tolist())) == 7 and wcss(pts, lab) == 0.0


def test_kmeans_blobs(rng):
    pts = np.vstack([rng.normal(0, 0.1, (30, 2)), rng.normal(10, 0.1, (30, 2))])
    lab = kmeans_pp(pts, 2, seed=3)
    assert same_partition(lab, [0] * 30 + [1] * 30)


def test_kmeans_beats_random_labelings(rng):
    pts = rng.normal(size=(100, 3))
    best = wcss(pts, kmeans_pp(pts, 4, seed=1))
    for _ in range(100):
        assert best <= wcss(pts, rng.integers(0, 4, 100))


def test_kmeans_bad_rho():
    with pytest.raises(ClusteringError):
        kmeans_pp(np.zeros((2, 2)), 3)


# -- spectral ------------------------------------------------------------------------

def test_spectral_two_k5():
    cl = spectral_cluster(two_k5())
    assert same_partition(cl.labels, [0] * 5 + [1] * 5)


def test_spectral_k6():
    assert spectral_cluster(clique(6)).cluster_count == 1


def test_spectral_planted():
    G, truth, _ = generate(GeneratorParams(200, 5, 20, 0.05, (50, 50, 50, 50), seed=2))
    assert nmi(spectral_cluster(G), truth) >= 0.95


def test_spectral_forced_rho_separates_components(rng):
    for trial in range(10):
        parts = int(rng.integers(2, 5))
        edges, off = [], 0
        for _ in range(parts):
            size = int(rng.integers(4, 12))
            g = gnp(size, 0.6, rng)
            # a spanning path keeps each block connected
            edges += [(off + u, off + v) for u, v in g.edges().tolist()]
            edges += [(off + i, off + i + 1) for i in range(size - 1)]
            off += size
        G = build_graph(edges)
        cl = spectral_cluster(G, SpectralConfig(rho=parts, seed=trial))
        assert same_partition(cl.labels, connected_components(G))


def test_spectral_isolated_vertex_joins_origin_nearest():
    G = build_graph(complete_edges(range(5)) + complete_edges(range(5, 10)), vertices=[10])
    cl = spectral_cluster(G, SpectralConfig(rho=2))
    assert cl.cluster_count == 2
    assert same_partition(cl.labels[:10], [0] * 5 + [1] * 5)


def test_spectral_small_and_edgeless_fallback():
    assert spectral_cluster(build_graph([(0, 1)])).cluster_count == 1
    assert spectral_cluster(build_graph([], vertices=range(4))).cluster_count == 4
    assert spectral_cluster(clique(4), SpectralConfig(rho=9)).cluster_count == 1


def test_spectral_capacity():
    with pytest.raises(CapacityError):
        spectral_cluster(clique(6), SpectralConfig(dense_solver_limit=5))


def test_spectral_deterministic(rng):
    G = gnp(80, 0.1, rng)
    a = spectral_cluster(G, SpectralConfig(rho=4, seed=9))
    b = spectral_cluster(G, SpectralConfig(rho=4, seed=9))
    assert a == b


# -- modularity optimisers -----------------------------------------------------------

def exhaustive_best(G):
    best, arg = -np.inf, None
    for part in set_partitions(list(range(G.n))):
        lab = np.empty(G.n, dtype=np.int64)
        for c, block in enumerate(part):
            lab[block] = c
        q = modularity(G, lab)
        if q > best + 1e-12:
            best, arg = q, lab
    return best, arg


def ring_of_cliques(count=4, size=5):
    edges = []
    for c in range(count):
        edges += complete_edges(range(c * size, (c + 1) * size))
        edges.append((c * size, ((c + 1) % count) * size + 1))
    return build_graph(edges)


@pytest.fixture(scope="module")
def bridged_optimum():
    return exhaustive_best(two_k5(bridge=True))


@pytest.mark.parametrize("algo", [fast_greedy_modularity, lambda G: multilevel_modularity(G, seed=0)])
def test_optimisers_bridged_k5(algo, bridged_optimum):
    G = two_k5(bridge=True)
    cl = algo(G)
    assert same_partition(cl.labels, bridged_optimum[1])
    assert modularity(G, cl) == pytest.approx(bridged_optimum[0], abs=1e-12)


@pytest.mark.parametrize("algo", [fast_greedy_modularity, multilevel_modularity])
def test_optimisers_single_clique(algo):
    assert algo(clique(6)).cluster_count == 1


def test_multilevel_ring_of_cliques():
    G = ring_of_cliques()
    cl = multilevel_modularity(G, seed=0)
    assert same_partition(cl.labels, np.repeat(np.arange(4), 5))


def test_optimisers_never_below_singletons(rng):
    for _ in range(10):
        G = gnp(40, 0.12, rng)
        if G.m == 0:
            continue
        q0 = modularity(G, np.arange(G.n))
        for cl in (fast_greedy_modularity(G), multilevel_modularity(G, seed=1)):
            assert modularity(G, cl) >= q0 - 1e-12


def test_optimisers_near_exhaustive_on_small_graphs(rng):
    for _ in range(5):
        G = gnp(8, 0.4, rng)
        if G.m == 0:
            continue
        best, _ = exhaustive_best(G)
        for cl in (fast_greedy_modularity(G), multilevel_modularity(G, seed=0)):
            assert modularity(G, cl) <= best + 1e-12
            assert modularity(G, cl) == pytest.approx(modularity_by_pairs(G, cl.labels), abs=1e-12)


def test_multilevel_against_networkx_quality(rng):
    nx = pytest.importorskip("networkx")
    G, truth, _ = generate(GeneratorParams(300, 5, 20, 0.1, seed=4))
    H = nx.Graph(G.edges().tolist())
    ref = nx.community.modularity(H, nx.community.louvain_communities(H, seed=0))
    assert modularity(G, multilevel_modularity(G, seed=0)) >= ref - 0.02


def test_fastgreedy_matches_networkx_on_small_graph():
    nx = pytest.importorskip("networkx")
    G = ring_of_cliques(3, 4)
    H = nx.Graph(G.edges().tolist())
    ref = nx.community.greedy_modularity_communities(H)
    q_ref = nx.community.modularity(H, ref)
    assert modularity(G, fast_greedy_modularity(G)) == pytest.approx(q_ref, abs=1e-9)


def test_isolated_vertices_stay_singletons():
    G = build_graph(complete_edges(range(4)), vertices=[7, 8])
    for cl in (fast_greedy_modularity(G), multilevel_modularity(G)):
        assert cl.labels[4] != cl.labels[5]
        assert len(set(cl.labels[:4].tolist())) == 1
