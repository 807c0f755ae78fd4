"""Full Fock-space reference implementation for small clusters.

Builds the same Hamiltonian from full-Fock Jordan-Wigner operators with no
sector bookkeeping, and traces over all 2^N (2S+1)^N states. Only meant for
N <= 3 cross-checks.
"""
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from ..lattice import LatticeGraph, coulomb_matrix
from ..model import ModelParams, PinningPattern, site_potentials
from .basis import embed_site, fermion_operators, spin_operators


def full_fock_hamiltonian(
    graph: LatticeGraph, p: ModelParams, pinning: Optional[PinningPattern] = None
) -> np.ndarray:
    N = graph.n_sites
    c = fermion_operators(N)
    n_op = [ci.T @ ci for ci in c]
    Ix, _, Iz = spin_operators(p.S)
    Sz = [embed_site(Iz, i, N) for i in range(N)]
    Sx = [embed_site(Ix, i, N) for i in range(N)]
    f_eye = sp.identity(1 << N)
    s_eye = sp.identity(p.spin_dim ** N)
    pots = site_potentials(p, graph, pinning)
    V = coulomb_matrix(graph, p.V0, p.screening).V if p.V0 > 0 else np.zeros((N, N))

    Hf = sp.csr_matrix((1 << N, 1 << N))
    for i, j in graph.neighbor_pairs:
        Hf = Hf - p.t * (c[i].T @ c[j] + c[j].T @ c[i])
    for i in range(N):
        Hf = Hf - pots.mu[i] * n_op[i]
        for j in range(i + 1, N):
            Hf = Hf + V[i, j] * (n_op[i] @ n_op[j])
    H = sp.kron(Hf, s_eye)
    for i in range(N):
        H = H - p.g_mev * sp.kron(n_op[i], Sz[i])
        H = H - sp.kron(f_eye, (p.h_z + pots.epsilon[i]) * Sz[i] + p.h_x * Sx[i])
    return H.toarray()


def full_trace_expectation(
    graph: LatticeGraph,
    p: ModelParams,
    beta: float,
    mu: float,
    observable: np.ndarray,
    pinning: Optional[PinningPattern] = None,
) -> float:
    """Tr[O e^{-β(H - μ n)}] / Tr[e^{-β(H - μ n)}] with H built at p.mu and μ absolute"""
    N = graph.n_sites
    H = full_fock_hamiltonian(graph, p, pinning)
    c = fermion_operators(N)
    n_tot = sum(ci.T @ ci for ci in c)
    n_full = sp.kron(n_tot, sp.identity(p.spin_dim ** N)).toarray()
    K = H + (p.mu - mu) * n_full
    E, X = scipy.linalg.eigh(K)
    w = np.exp(-beta * (E - E.min()))
    rho = (X * w) @ X.conj().T
    return float(np.real(np.trace(rho @ observable)) / w.sum())


def full_number_operator(n_sites: int, spin_dim: int) -> np.ndarray:
    c = fermion_operators(n_sites)
    n_tot = sum(ci.T @ ci for ci in c)
    return sp.kron(n_tot, sp.identity(spin_dim ** n_sites)).toarray()
