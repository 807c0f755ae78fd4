from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.linalg

from ..errors import BandError
from ..lattice import LatticeGraph, honeycomb_basis
from ..meanfield import MeanFieldState
from ..model import ModelParams
from ..observables import staggered_magnetization

FERMI_TOLERANCE = 1e-9
ZONE_SLACK = 1e-12


@dataclass
class DispersionGrid:
    """Band energies (meV) on a set of k-points (1/nm), bands ascending per k"""
    k: np.ndarray
    energies: np.ndarray

    def __post_init__(self):
        self.k = np.atleast_2d(np.asarray(self.k, dtype=float))
        energies = np.asarray(self.energies)
        if np.iscomplexobj(energies) and np.abs(energies.imag).max() > 1e-12:
            raise BandError("band energies must be real")
        self.energies = np.sort(np.real(energies).reshape(len(self.k), -1), axis=1)

    @property
    def n_bands(self) -> int:
        return self.energies.shape[1]

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({"k_x": self.k[:, 0], "k_y": self.k[:, 1]})
        if self.n_bands == 2:
            frame["eps_minus"], frame["eps_plus"] = self.energies[:, 0], self.energies[:, 1]
        else:
            for b in range(self.n_bands):
                frame[f"eps_{b}"] = self.energies[:, b]
        return frame


def chain_dispersion(k, t: float, a: float):
    return -2 * t * np.cos(np.asarray(k) * a)


def square_dispersion(k, t: float, a: float):
    """ε(k) = -2t[cos(k_x a) + cos(k_y a)] for k of shape (..., 2)"""
    k = np.asarray(k, dtype=float)
    return -2 * t * (np.cos(k[..., 0] * a) + np.cos(k[..., 1] * a))


def nesting_check(k, a: float, t: float = 1.0, tol: float = FERMI_TOLERANCE) -> bool:
    """Whether k + Q, Q = (π/a, π/a), lies on the Fermi surface again"""
    k = np.asarray(k, dtype=float)
    if abs(square_dispersion(k, t, a)) >= tol * t:
        raise BandError(f"k = {k.tolist()} is not on the half-filled Fermi surface")
    Q = np.array([np.pi / a, np.pi / a])
    return bool(abs(square_dispersion(k + Q, t, a)) < tol * t)


def _gapped_energy(k_plus, k_minus, t: float, mass: float, a: float) -> np.ndarray:
    c = np.cos(np.asarray(k_plus) * a / np.sqrt(2)) * np.cos(np.asarray(k_minus) * a / np.sqrt(2))
    return np.sqrt(mass ** 2 + 16 * t ** 2 * c ** 2)


def gapped_square_spectrum(k_plus, k_minus, t: float, g: float, S: float, phi0: float, a: float) -> Tuple:
    """Staggered-field spectrum ±√[(gSφ₀)² + 16t² cos²(k₊a/√2) cos²(k₋a/√2)].

    ``g`` is in μeV like ModelParams.g; k± are rotated momenta restricted to
    the reduced zone.
    """
    edge = np.pi / (np.sqrt(2) * a)
    for name, val in (("k_plus", k_plus), ("k_minus", k_minus)):
        val = np.asarray(val)
        if np.any(val <= -edge - ZONE_SLACK) or np.any(val > edge + ZONE_SLACK):
            raise BandError(f"{name} outside the reduced zone (-π/(√2a), π/(√2a)]")
    eps = _gapped_energy(k_plus, k_minus, t, g * 1e-3 * S * phi0, a)
    return -eps, eps


def reciprocal_vectors(a1: np.ndarray, a2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """b_i · a_j = 2π δ_ij"""
    B = 2 * np.pi * np.linalg.inv(np.vstack([a1, a2])).T
    return B[0], B[1]


def honeycomb_dirac_point(a: float) -> np.ndarray:
    return (2 * np.pi / (3 * a)) * np.array([1.0, 1.0 / np.sqrt(3)])


def honeycomb_bands(k, t: float, a: float) -> Tuple:
    """ε± = ±t|1 + e^{ik·a₁} + e^{ik·a₂}|"""
    k = np.asarray(k, dtype=float)
    a1, a2 = honeycomb_basis(a)
    f = 1 + np.exp(1j * (k @ a1)) + np.exp(1j * (k @ a2))
    eps = t * np.abs(f)
    return -eps, eps


def honeycomb_fermi_velocity(t: float, a: float, direction: Sequence[float] = (1.0, 0.0), step: float = 1e-4) -> float:
    """Cone slope at K, averaged over ±step along ``direction`` (step in units of 1/a)"""
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    K = honeycomb_dirac_point(a)
    h = step / a
    up = honeycomb_bands(K + h * u, t, a)[1]
    down = honeycomb_bands(K - h * u, t, a)[1]
    return float((up + down) / (2 * h))


def chain_fermi_velocity(t: float, a: float, step: float = 1e-4) -> float:
    """Central-difference slope of the chain band at k_F = π/(2a)"""
    kF = np.pi / (2 * a)
    h = step / a
    return float((chain_dispersion(kF + h, t, a) - chain_dispersion(kF - h, t, a)) / (2 * h))


def gap_from_state(state: MeanFieldState, graph: LatticeGraph, p: ModelParams) -> Tuple[float, float]:
    """(φ₀, 2gS|φ₀|) with φ₀ the staggered spin amplitude of a converged state"""
    phi0 = abs(staggered_magnetization(graph, p.S, state.spins[:, 2]))
    return phi0, 2 * p.g_mev * p.S * phi0


def real_space_free_spectrum(graph: LatticeGraph, t: float) -> np.ndarray:
    """Eigenvalues of -t Σ (c_i† c_j + h.c.) on the graph"""
    return scipy.linalg.eigvalsh(-t * graph.adjacency())
