from math import comb
from typing import Dict, Iterable, Optional

import numpy as np
import scipy.sparse as sp
from loguru import logger

from ..errors import DimensionCapExceeded, SpectrumError
from ..lattice import LatticeGraph, coulomb_matrix
from ..model import ModelParams, PinningPattern, site_potentials
from .basis import (
    ManyBodyBasis,
    embed_site,
    fermion_hopping_matrix,
    occupation_diagonal,
    sector_states,
    spin_operators,
)

DEFAULT_DIMENSION_CAP = 200_000
HERMITICITY_TOLERANCE = 1e-12


def sector_dimension(n_sites: int, n: int, spin_dim: int) -> int:
    return comb(n_sites, n) * spin_dim ** n_sites


def _fermion_block(graph: LatticeGraph, p: ModelParams, n: int, mu: np.ndarray, V: np.ndarray) -> sp.csr_matrix:
    N = graph.n_sites
    states = sector_states(N, n)
    occ = ((states[:, None] >> np.arange(N)[None, :]) & 1).astype(float)
    # -Σ μ_i n_i + Σ_{i<j} V_ij n_i n_j
    diag = -occ @ mu + 0.5 * np.einsum("ai,ij,aj->a", occ, V, occ)
    H = sp.diags(diag, format="csr")
    for i, j in graph.neighbor_pairs:
        hop = fermion_hopping_matrix(N, n, i, j)
        H = H - p.t * (hop + hop.T)
    return H.tocsr()


def _spin_block(graph: LatticeGraph, p: ModelParams, epsilon: np.ndarray) -> sp.csr_matrix:
    N = graph.n_sites
    Ix, _, Iz = spin_operators(p.S)
    H = sp.csr_matrix((p.spin_dim ** N, p.spin_dim ** N))
    for i in range(N):
        H = H - (p.h_z + epsilon[i]) * embed_site(Iz, i, N) - p.h_x * embed_site(Ix, i, N)
    return H.tocsr()


def build_sector_hamiltonian(
    graph: LatticeGraph,
    p: ModelParams,
    n: int,
    pinning: Optional[PinningPattern] = None,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> sp.csr_matrix:
    """Sector-n block of the fermion ⊗ nuclear-spin Hamiltonian.

    H = -t Σ_<ij>(c_i†c_j + h.c.) - Σ μ_i n_i - Σ_i (g n_i I_i^z + h_z I_i^z + h_x I_i^x)
        + Σ_{i<j} V_ij n_i n_j - Σ_i ε_i I_i^z
    """
    N = graph.n_sites
    if not 0 <= n <= N:
        raise SpectrumError(f"sector n={n} outside 0..{N}")
    basis = ManyBodyBasis(N, p.spin_dim, n)
    if basis.dim > cap:
        raise DimensionCapExceeded(n, basis.dim, cap)

    pots = site_potentials(p, graph, pinning)
    V = coulomb_matrix(graph, p.V0, p.screening).V if p.V0 > 0 else np.zeros((N, N))
    spin_eye = sp.identity(basis.spin_space_dim, format="csr")
    fermion_eye = sp.identity(basis.fermion_dim, format="csr")

    H = sp.kron(_fermion_block(graph, p, n, pots.mu, V), spin_eye, format="csr")
    H = H + sp.kron(fermion_eye, _spin_block(graph, p, pots.epsilon), format="csr")
    if p.g != 0 and n > 0:
        _, _, Iz = spin_operators(p.S)
        for i in range(N):
            D = sp.diags(occupation_diagonal(N, n, i), format="csr")
            H = H - p.g_mev * sp.kron(D, embed_site(Iz, i, N), format="csr")

    H = H.tocsr()
    if H.nnz and abs(H - H.conj().T).max() > HERMITICITY_TOLERANCE:
        raise SpectrumError(f"non-Hermitian assembly in sector n={n}")
    return H


def build_hamiltonian(
    graph: LatticeGraph,
    p: ModelParams,
    pinning: Optional[PinningPattern] = None,
    sectors: Optional[Iterable[int]] = None,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> Dict[int, sp.csr_matrix]:
    sectors = range(graph.n_sites + 1) if sectors is None else sectors
    blocks = {n: build_sector_hamiltonian(graph, p, n, pinning, cap) for n in sectors}
    logger.debug(f"Assembled {len(blocks)} sectors, largest dim {max(b.shape[0] for b in blocks.values())}")
    return blocks
