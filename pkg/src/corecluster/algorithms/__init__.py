"""Built-in clustering algorithms and the registry used by the CLI."""

from .base import CapacityError, ClusterAlgorithm, Clustering, ClusteringError, component_clustering
from .modularity import FastGreedy, MultiLevel, fast_greedy_modularity, multilevel_modularity
from .spectral import (
    SpectralClustering,
    SpectralConfig,
    eigengap_cluster_count,
    kmeans_pp,
    normalized_laplacian,
    spectral_cluster,
)

ALGORITHMS = {
    "spectral": SpectralClustering,
    "fastgreedy": FastGreedy,
    "multilevel": MultiLevel,
}


def get_algorithm(name: str, **options) -> ClusterAlgorithm:
    """Instantiate a registered algorithm; ``rho`` is forwarded to spectral only."""
    try:
        cls = ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}") from None
    if cls is SpectralClustering:
        return SpectralClustering(SpectralConfig(**options))
    return cls()


__all__ = [
    "ALGORITHMS",
    "CapacityError",
    "ClusterAlgorithm",
    "Clustering",
    "ClusteringError",
    "FastGreedy",
    "MultiLevel",
    "SpectralClustering",
    "SpectralConfig",
    "component_clustering",
    "eigengap_cluster_count",
    "fast_greedy_modularity",
    "get_algorithm",
    "kmeans_pp",
    "multilevel_modularity",
    "normalized_laplacian",
    "spectral_cluster",
]
