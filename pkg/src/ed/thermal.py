from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import scipy.sparse as sp
from loguru import logger

from ..errors import SpectrumError
from ..lattice import LatticeGraph
from ..model import ModelParams, PinningPattern
from .basis import (
    embed_site,
    fermion_hopping_matrix,
    occupation_diagonal,
    sector_states,
    spin_operators,
)
from .spectrum import ManyBodySpectrum, degeneracy_tolerance, diagonalize

WEIGHT_CUTOFF = 1e-14

SectorOperator = Callable[[int], sp.spmatrix]
Observable = Union[SectorOperator, Mapping[int, sp.spmatrix]]


def _fermion_dim(spectrum: ManyBodySpectrum, n: int) -> int:
    return len(sector_states(spectrum.n_sites, n))


def _spin_eye(spectrum: ManyBodySpectrum) -> sp.csr_matrix:
    return sp.identity(spectrum.spin_dim ** spectrum.n_sites, format="csr")


def number_operator(spectrum: ManyBodySpectrum) -> SectorOperator:
    return lambda n: n * sp.identity(spectrum.vectors[n].shape[0], format="csr")


def site_density_operator(spectrum: ManyBodySpectrum, i: int) -> SectorOperator:
    return lambda n: sp.kron(
        sp.diags(occupation_diagonal(spectrum.n_sites, n, i)), _spin_eye(spectrum), format="csr"
    )


def hopping_operator(spectrum: ManyBodySpectrum, i: int, j: int) -> SectorOperator:
    """c_i† c_j; the diagonal i == j is the site density"""
    if i == j:
        return site_density_operator(spectrum, i)
    return lambda n: sp.kron(fermion_hopping_matrix(spectrum.n_sites, n, i, j), _spin_eye(spectrum), format="csr")


def _spin_site_operator(spectrum: ManyBodySpectrum, component: int, i: int) -> SectorOperator:
    op = embed_site(spin_operators(spectrum.S)[component], i, spectrum.n_sites)
    return lambda n: sp.kron(sp.identity(_fermion_dim(spectrum, n)), op, format="csr")


def spin_z_operator(spectrum: ManyBodySpectrum, i: int) -> SectorOperator:
    return _spin_site_operator(spectrum, 2, i)


def spin_x_operator(spectrum: ManyBodySpectrum, i: int) -> SectorOperator:
    return _spin_site_operator(spectrum, 0, i)


def spin_zz_operator(spectrum: ManyBodySpectrum, i: int, j: int) -> SectorOperator:
    _, _, Iz = spin_operators(spectrum.S)
    N = spectrum.n_sites
    op = embed_site(Iz, i, N) @ embed_site(Iz, j, N)
    return lambda n: sp.kron(sp.identity(_fermion_dim(spectrum, n)), op, format="csr")


def boltzmann_weights(
    spectrum: ManyBodySpectrum, beta: Optional[float], mu: Optional[float] = None
) -> Dict[int, np.ndarray]:
    """Normalized grand-canonical weights exp(-β(E - μn)) per sector.

    ``beta=None`` averages uniformly over the global ground manifold.
    """
    grand = {n: spectrum.grand_energies(n, mu) for n in spectrum.sectors}
    e_min = min(float(E.min()) for E in grand.values())
    if beta is None:
        tol = degeneracy_tolerance(e_min)
        weights = {n: (E - e_min <= tol).astype(float) for n, E in grand.items()}
    else:
        if beta <= 0:
            raise SpectrumError(f"beta must be positive, got {beta}")
        weights = {}
        for n, E in grand.items():
            w = np.exp(-beta * (E - e_min))
            w[w < WEIGHT_CUTOFF] = 0.0
            weights[n] = w
    total = sum(w.sum() for w in weights.values())
    return {n: w / total for n, w in weights.items()}


def _resolve(observable: Observable, n: int) -> sp.spmatrix:
    return observable[n] if isinstance(observable, Mapping) else observable(n)


def ensemble_average(
    spectrum: ManyBodySpectrum, weights: Dict[int, np.ndarray], observable: Observable
) -> complex:
    total = 0.0 + 0.0j
    for n, w in weights.items():
        active = np.flatnonzero(w)
        if active.size == 0:
            continue
        X = spectrum.vectors[n][:, active]
        O = _resolve(observable, n)
        if O.shape != (X.shape[0], X.shape[0]):
            raise SpectrumError(f"observable shape {O.shape} does not match sector n={n} dimension {X.shape[0]}")
        diag = np.einsum("ia,ia->a", X.conj(), O @ X)
        total += np.dot(w[active], diag)
    return complex(total)


def thermal_expectation(
    spectrum: ManyBodySpectrum, beta: Optional[float], mu: Optional[float], observable: Observable
) -> float:
    """<O> = Tr[O e^{-β(H - μn)}] / Tr[e^{-β(H - μn)}] over every sector.

    ``mu`` is absolute; ``None`` keeps the value the spectrum was built with.
    """
    return ensemble_average(spectrum, boltzmann_weights(spectrum, beta, mu), observable).real


def one_body_density(spectrum: ManyBodySpectrum, beta: Optional[float], mu: Optional[float] = None) -> np.ndarray:
    """ρ_ij = <c_j† c_i>"""
    weights = boltzmann_weights(spectrum, beta, mu)
    N = spectrum.n_sites
    rho = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for j in range(i, N):
            value = ensemble_average(spectrum, weights, hopping_operator(spectrum, j, i))
            rho[i, j] = value
            rho[j, i] = np.conj(value)
    return rho


def spin_profile(
    spectrum: ManyBodySpectrum, beta: Optional[float], mu: Optional[float] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Per-site (<I^z>, <I^x>)"""
    weights = boltzmann_weights(spectrum, beta, mu)
    N = spectrum.n_sites
    mz = np.array([ensemble_average(spectrum, weights, spin_z_operator(spectrum, i)).real for i in range(N)])
    mx = np.array([ensemble_average(spectrum, weights, spin_x_operator(spectrum, i)).real for i in range(N)])
    return mz, mx


def spin_correlations(
    spectrum: ManyBodySpectrum, beta: Optional[float], mu: Optional[float], reference: int
) -> np.ndarray:
    """<I_ref^z I_i^z> for every site i"""
    weights = boltzmann_weights(spectrum, beta, mu)
    return np.array([
        ensemble_average(spectrum, weights, spin_zz_operator(spectrum, reference, i)).real
        for i in range(spectrum.n_sites)
    ])


def total_charge_profile(
    graph: LatticeGraph,
    p: ModelParams,
    beta: Optional[float],
    mu_grid: Sequence[float],
    couplings: Sequence[Tuple[float, float]],
    pinning: Optional[PinningPattern] = None,
    **diag_kwargs,
) -> pd.DataFrame:
    """<n> = Σ_i <c_i†c_i> over a μ grid for each (g [μeV], h_z [meV]) pair.

    Each coupling pair is diagonalized once; μ enters only through the weights.
    Rows also carry the ED Néel parameter so plateaus can be compared with phases.
    """
    from ..observables.neel import neel_order

    if len(mu_grid) == 0 or len(couplings) == 0:
        raise SpectrumError("charge profile needs non-empty μ and coupling grids")
    rows = []
    reference = graph.reference_site()
    for g, h_z in couplings:
        spectrum = diagonalize(graph, p.model_copy(update={"g": g, "h_z": h_z}), pinning, **diag_kwargs)
        count = number_operator(spectrum)
        for mu in mu_grid:
            total_n = thermal_expectation(spectrum, beta, mu, count)
            corr = spin_correlations(spectrum, beta, mu, reference)
            rows.append({
                "g": g,
                "h_z": h_z,
                "mu": float(mu),
                "n": total_n,
                "n_z": neel_order(graph, p.S, correlations=corr),
            })
        logger.debug(f"Charge profile done for g={g}, h_z={h_z}")
    return pd.DataFrame(rows)
