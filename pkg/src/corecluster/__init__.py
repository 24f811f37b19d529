"""Graph clustering accelerated by the k-core hierarchy.

A base clustering algorithm is applied to the maximum k-core; lower layers of
the core decomposition are attached to existing clusters where their
neighbourhoods allow it, and only the leftovers are clustered afresh.
"""

__version__ = "0.1.0"

from .algorithms import (
    Clustering,
    FastGreedy,
    MultiLevel,
    SpectralClustering,
    SpectralConfig,
    fast_greedy_modularity,
    multilevel_modularity,
    spectral_cluster,
)
from .degeneracy import CoreDecomposition, core_decomposition, core_expansion_sequence, k_core
from .framework import CoreCluster, SelectionParams, acceleration_stats, corecluster
from .graph import Graph, build_graph, induced_subgraph
from .kernels import BACKEND
from .metrics import conductance, modularity, nmi

__all__ = [
    "BACKEND",
    "Clustering",
    "CoreCluster",
    "CoreDecomposition",
    "FastGreedy",
    "Graph",
    "MultiLevel",
    "SelectionParams",
    "SpectralClustering",
    "SpectralConfig",
    "acceleration_stats",
    "build_graph",
    "conductance",
    "core_decomposition",
    "core_expansion_sequence",
    "corecluster",
    "fast_greedy_modularity",
    "induced_subgraph",
    "k_core",
    "modularity",
    "multilevel_modularity",
    "nmi",
    "spectral_cluster",
]
