from typing import Optional

import numpy as np

from ..errors import ObservableError
from ..lattice import LatticeGraph


def _check_bipartite(graph: LatticeGraph) -> None:
    seams = set(graph.seam_pairs)
    for i, j in graph.neighbor_pairs:
        if graph.sublattice[i] == graph.sublattice[j] and (i, j) not in seams:
            raise ObservableError(f"bond ({i}, {j}) joins equal sublattices; Néel parity undefined")


def neel_order(
    graph: LatticeGraph,
    S: float,
    spins_z: Optional[np.ndarray] = None,
    correlations: Optional[np.ndarray] = None,
) -> float:
    """Néel parameter n_z = -(1/(N S²)) Σ_i δ_ref δ_i <I_ref^z I_i^z>.

    Pass ED two-point ``correlations`` (<I_ref^z I_i^z> for all i, ref being the
    first A site) or mean-field ``spins_z``, which factorize as m_ref m_i.
    Perfect Néel order gives -1, a uniformly polarized array 0.
    """
    _check_bipartite(graph)
    ref = graph.reference_site()
    if correlations is None:
        if spins_z is None:
            raise ObservableError("neel_order needs spins or correlations")
        correlations = spins_z[ref] * np.asarray(spins_z, dtype=float)
    correlations = np.asarray(correlations, dtype=float)
    if correlations.shape != (graph.n_sites,):
        raise ObservableError(f"expected {graph.n_sites} correlations, got {correlations.shape}")
    delta = graph.sublattice
    return float(-np.sum(delta[ref] * delta * correlations) / (graph.n_sites * S ** 2))


def raw_neel_order(n_z: float, S: float) -> float:
    """Value of the pair-sum definition without the 1/S normalization fix"""
    return S * n_z


def staggered_magnetization(graph: LatticeGraph, S: float, spins_z: np.ndarray) -> float:
    """Σ_i δ_i <I_i^z> / (N S); odd under a global spin flip"""
    _check_bipartite(graph)
    return float(np.sum(graph.sublattice * np.asarray(spins_z)) / (graph.n_sites * S))


def pairing_average(K: np.ndarray) -> float:
    """K̃ = (1/N²) Σ_ij |K_ij|²"""
    K = np.asarray(K)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ObservableError("pairing matrix must be square")
    return float(np.sum(np.abs(K) ** 2) / K.shape[0] ** 2)
