import numpy as np

from ..lattice import honeycomb_basis
from .dispersion import DispersionGrid, _gapped_energy, honeycomb_bands, reciprocal_vectors, square_dispersion

DEFAULT_RESOLUTION = 256


def monkhorst_pack(n: int, b1: np.ndarray, b2: np.ndarray) -> np.ndarray:
    """n×n uniform k-grid, offsets (2r - n - 1)/(2n) along each reciprocal vector"""
    u = (2 * np.arange(1, n + 1) - n - 1) / (2 * n)
    r, s = np.meshgrid(u, u, indexing="ij")
    return r.reshape(-1, 1) * np.asarray(b1) + s.reshape(-1, 1) * np.asarray(b2)


def square_band_table(t: float, a: float, n: int = DEFAULT_RESOLUTION, mass: float = 0.0) -> DispersionGrid:
    """±√(m² + ε(k)²) over the full square zone; m = gSφ₀ in meV, m = 0 gives ±|ε|"""
    k = monkhorst_pack(n, np.array([2 * np.pi / a, 0.0]), np.array([0.0, 2 * np.pi / a]))
    if mass == 0:
        eps = np.abs(square_dispersion(k, t, a))
    else:
        k_plus = (k[:, 0] + k[:, 1]) / np.sqrt(2)
        k_minus = (k[:, 0] - k[:, 1]) / np.sqrt(2)
        eps = _gapped_energy(k_plus, k_minus, t, mass, a)
    return DispersionGrid(k=k, energies=np.column_stack([-eps, eps]))


def honeycomb_band_table(t: float, a: float, n: int = DEFAULT_RESOLUTION) -> DispersionGrid:
    b1, b2 = reciprocal_vectors(*honeycomb_basis(a))
    k = monkhorst_pack(n, b1, b2)
    lower, upper = honeycomb_bands(k, t, a)
    return DispersionGrid(k=k, energies=np.column_stack([lower, upper]))


def fermi_surface_locus(a: float, points: int = 200) -> np.ndarray:
    """Half-filling diamond |k_x| + |k_y| = π/a, sampled by angle"""
    theta = 2 * np.pi * np.arange(points) / points
    c, s = np.cos(theta), np.sin(theta)
    return (np.pi / a) * np.column_stack([c, s]) / (np.abs(c) + np.abs(s))[:, None]
