from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
from loguru import logger

from ..errors import SimulationError

ZERO_MODE_TOLERANCE = 1e-10


@dataclass
class BogoliubovResult:
    U: np.ndarray
    V: np.ndarray
    E_qp: np.ndarray
    occupations: np.ndarray
    rho: np.ndarray
    K: np.ndarray
    zero_modes: int = 0


def fermi_dirac(E: np.ndarray, beta: Optional[float]) -> np.ndarray:
    """(1 + e^{βE})^{-1}; ``beta=None`` is the step function with f(0) = 1/2"""
    E = np.asarray(E, dtype=float)
    if beta is None:
        f = (E < 0).astype(float)
        f[np.abs(E) <= ZERO_MODE_TOLERANCE] = 0.5
        return f
    return 0.5 * (1.0 - np.tanh(0.5 * beta * E))


def fermion_entropy(f: np.ndarray) -> float:
    f = np.clip(f, 1e-300, 1.0)
    g = np.clip(1.0 - f, 1e-300, 1.0)
    return float(-np.sum(f * np.log(f) + g * np.log(g)))


def _select_zero_branch(Z: np.ndarray, m: int, previous: Optional[np.ndarray]) -> np.ndarray:
    """m-dimensional half of a zero-energy subspace.

    Maximal overlap with the previous positive branch when given, otherwise
    the most particle-like combinations (largest <τ_z>).
    """
    N = Z.shape[0] // 2
    if previous is not None:
        P = Z.conj().T @ previous
        M = P @ P.conj().T
    else:
        tau = np.concatenate([np.ones(N), -np.ones(N)])
        M = Z.conj().T @ (tau[:, None] * Z)
    _, vecs = np.linalg.eigh(M)
    return Z @ vecs[:, -m:]


def bogoliubov_step(
    H_sp: np.ndarray,
    Delta: np.ndarray,
    beta: Optional[float],
    mu: float = 0.0,
    previous: Optional[np.ndarray] = None,
) -> BogoliubovResult:
    """Diagonalize [[H - μ, Δ], [-Δ*, -(H - μ)*]] and rebuild (ρ, K).

    The generalized density f(H_BdG) over all 2N eigenpairs gives ρ and K.
    ``previous`` is the last positive branch stacked as columns (2N x N),
    used to break ties inside a zero-energy subspace.
    """
    N = H_sp.shape[0]
    h = H_sp - mu * np.eye(N)
    H_bdg = np.block([[h, Delta], [-Delta.conj(), -h.conj()]])
    try:
        E, W = scipy.linalg.eigh(H_bdg)
    except np.linalg.LinAlgError as e:
        raise SimulationError(f"BdG eigensolver failed: {e}") from e

    f_all = fermi_dirac(E, beta)
    R = (W * f_all) @ W.conj().T
    rho = R[:N, :N]
    K = R[:N, N:]
    rho = 0.5 * (rho + rho.conj().T)
    K = 0.5 * (K - K.T)

    positive = np.flatnonzero(E > ZERO_MODE_TOLERANCE)
    zero = np.flatnonzero(np.abs(E) <= ZERO_MODE_TOLERANCE)
    m = N - len(positive)
    columns = [W[:, positive]]
    energies = [E[positive]]
    if m > 0:
        if len(zero) < m:
            raise SimulationError("BdG spectrum is not particle-hole symmetric")
        columns.insert(0, _select_zero_branch(W[:, zero], m, previous))
        energies.insert(0, np.abs(E[zero][:m]))
        logger.debug(f"{len(zero)} zero-energy quasiparticles; branch chosen by overlap")
    X = np.hstack(columns)
    E_qp = np.concatenate(energies)
    return BogoliubovResult(
        U=X[:N].T,
        V=X[N:].T,
        E_qp=E_qp,
        occupations=fermi_dirac(E_qp, beta),
        rho=rho,
        K=K,
        zero_modes=len(zero),
    )


def aufbau_step(H_sp: np.ndarray, n_electrons: int) -> BogoliubovResult:
    """Zero-temperature filling of the lowest ``n_electrons`` levels.

    A partly filled degenerate shell is occupied uniformly.
    """
    N = H_sp.shape[0]
    if not 0 <= n_electrons <= N:
        raise SimulationError(f"cannot place {n_electrons} electrons on {N} sites")
    eps, phi = scipy.linalg.eigh(H_sp)
    occ = np.zeros(N)
    shell = np.zeros(N, dtype=bool)
    if n_electrons > 0:
        last = eps[n_electrons - 1]
        tol = 1e-9 * max(1.0, abs(last))
        below = eps < last - tol
        shell = np.abs(eps - last) <= tol
        occ[below] = 1.0
        occ[shell] = (n_electrons - below.sum()) / shell.sum()
    if 0 < n_electrons < N and not shell[n_electrons]:
        e_fermi = 0.5 * (eps[n_electrons - 1] + eps[n_electrons])
    elif n_electrons > 0:
        e_fermi = eps[n_electrons - 1]
    else:
        e_fermi = eps[0]
    rho = (phi * occ) @ phi.conj().T

    # empty or partly filled levels are particle-like, full levels hole-like
    particle = occ < 1.0
    U = np.where(particle[None, :], phi, 0.0).T
    V = np.where(particle[None, :], 0.0, phi.conj()).T
    return BogoliubovResult(
        U=U,
        V=V,
        E_qp=np.abs(eps - e_fermi),
        occupations=np.where(particle, occ, 0.0),
        rho=0.5 * (rho + rho.conj().T),
        K=np.zeros((N, N), dtype=complex),
        zero_modes=int(shell.sum()) if 0 < occ[shell].sum() < shell.sum() else 0,
    )
