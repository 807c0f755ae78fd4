from dataclasses import dataclass

import numpy as np

from ..errors import LatticeError
from .geometry import LatticeGraph, pair_distances


@dataclass(frozen=True)
class CoulombMatrix:
    """Screened pair interaction V_ij = V0 exp(-λ d_ij) / d_ij in meV"""
    V: np.ndarray
    V0: float
    screening: float

    @property
    def n_sites(self) -> int:
        return self.V.shape[0]

    def background(self) -> np.ndarray:
        """½ Σ_j V_ij, the site shift that neutralizes a half-filled lattice"""
        return 0.5 * self.V.sum(axis=1)


def coulomb_matrix(graph: LatticeGraph, V0: float, screening: float = 0.0) -> CoulombMatrix:
    if V0 < 0:
        raise LatticeError(f"Coulomb strength V0 must be >= 0, got {V0}")
    if screening < 0:
        raise LatticeError(f"screening must be >= 0, got {screening}")
    d = pair_distances(graph)
    off = ~np.eye(graph.n_sites, dtype=bool)
    if np.any(d[off] <= 1e-12 * graph.lattice_constant):
        raise LatticeError("coincident site positions")
    V = np.zeros_like(d)
    V[off] = V0 * np.exp(-screening * d[off]) / d[off]
    return CoulombMatrix(V=V, V0=float(V0), screening=float(screening))
