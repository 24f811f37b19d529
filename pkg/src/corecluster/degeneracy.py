"""k-core decomposition and the core expansion sequence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import Graph


@dataclass(frozen=True, eq=False)
class CoreDecomposition:
    """Coreness of every vertex plus the layers ``V_0..V_k``.

    ``layers[i]`` holds the vertices of coreness exactly ``i`` (ascending ids);
    empty layers are kept so that the list index is the core rank.
    """

    coreness: np.ndarray
    degeneracy: int
    layers: tuple

    def layer(self, i: int) -> np.ndarray:
        return self.layers[i]

    def core_vertices(self, i: int) -> np.ndarray:
        return k_core(None, self, i)

    @property
    def layer_sizes(self) -> list[int]:
        return [len(x) for x in self.layers]


def core_decomposition(G: Graph) -> CoreDecomposition:
    """Coreness by linear-time bucket peeling (Batagelj and Zaversnik)."""
    coreness = kernels.core_numbers(G.indptr, G.indices)
    coreness.setflags(write=False)
    k = int(coreness.max()) if G.n else 0
    order = np.argsort(coreness, kind="stable")
    bounds = np.searchsorted(coreness[order], np.arange(k + 2))
    layers = []
    for i in range(k + 1):
        layer = order[bounds[i] : bounds[i + 1]]
        layer.setflags(write=False)
        layers.append(layer)
    return CoreDecomposition(coreness, k, tuple(layers))


def k_core(G: Graph | None, decomp: CoreDecomposition, i: int) -> np.ndarray:
    """Vertices of the ``i``-core, ascending."""
    if not 0 <= i <= decomp.degeneracy:
        raise ValueError(f"core rank {i} outside 0..{decomp.degeneracy}")
    return np.flatnonzero(decomp.coreness >= i)


def core_expansion_sequence(decomp: CoreDecomposition) -> list[np.ndarray]:
    """Layers ordered from the densest core outward: ``[V_k, ..., V_0]``."""
    return list(reversed(decomp.layers))
