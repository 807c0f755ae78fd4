from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import ModelError
from ..lattice import LatticeGraph, coulomb_matrix
from ..model import ModelParams, PinningPattern, site_potentials


@dataclass(frozen=True)
class LatticeProblem:
    """Static one-body data of a mean-field run.

    ``h0`` = -t A - diag(μ_i); ``V`` is the pair interaction counted once per
    pair, so the antisymmetrized vertex is V̄_ijkl = V_ij (δ_ik δ_jl - δ_il δ_jk)
    and its contractions reduce to the Hartree, Fock and pairing terms below.
    """
    graph: LatticeGraph
    params: ModelParams
    h0: np.ndarray
    V: np.ndarray
    epsilon: np.ndarray

    @classmethod
    def build(
        cls, graph: LatticeGraph, p: ModelParams, pinning: Optional[PinningPattern] = None
    ) -> "LatticeProblem":
        pots = site_potentials(p, graph, pinning)
        N = graph.n_sites
        V = coulomb_matrix(graph, p.V0, p.screening).V if p.V0 > 0 else np.zeros((N, N))
        h0 = -p.t * graph.adjacency() - np.diag(pots.mu)
        return cls(graph=graph, params=p, h0=h0, V=V, epsilon=pots.epsilon)

    @property
    def n_sites(self) -> int:
        return self.graph.n_sites

    def fields(
        self, rho: np.ndarray, K: np.ndarray, spins: Optional[np.ndarray] = None, fock: bool = True
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        N = self.n_sites
        if rho.shape != (N, N) or K.shape != (N, N):
            raise ModelError(f"density matrices must be {N}x{N}")
        density = np.real(np.diag(rho))
        gamma = np.diag(self.V @ density).astype(complex)
        if fock:
            gamma = gamma - self.V * rho
        delta = self.V * K
        H = self.h0 + gamma
        if spins is not None:
            H = H - np.diag(self.params.g_mev * spins[:, 2])
        return gamma, delta, H

    def interaction_energy(self, rho: np.ndarray, K: np.ndarray, fock: bool = True) -> float:
        density = np.real(np.diag(rho))
        pair = np.outer(density, density) + np.abs(K) ** 2
        if fock:
            pair = pair - np.abs(rho) ** 2
        return float(0.5 * np.sum(self.V * pair))


def mean_fields(
    rho: np.ndarray,
    K: np.ndarray,
    graph: LatticeGraph,
    p: ModelParams,
    spins: Optional[np.ndarray] = None,
    pinning: Optional[PinningPattern] = None,
    fock: bool = True,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(Γ, Δ, H_sp) for the density-density Coulomb vertex.

    Γ_ij = δ_ij Σ_k V_ik ρ_kk - V_ij ρ_ij (Fock part optional),
    Δ_ij = V_ij K_ij, H_sp = h0 + Γ - diag(g <I^z>).
    """
    return LatticeProblem.build(graph, p, pinning).fields(rho, K, spins, fock)
