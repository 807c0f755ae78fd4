from typing import Any, Dict, Optional

import numpy as np

from ..ed import ManyBodySpectrum, boltzmann_weights, one_body_density, spin_correlations, spin_profile
from ..lattice import LatticeGraph
from ..meanfield import MeanFieldState
from ..model import ModelParams
from .correlators import correlator_profile
from .models import ObservableReport
from .neel import neel_order, pairing_average, raw_neel_order, staggered_magnetization


def _correlator_rows(rho: np.ndarray, graph: LatticeGraph, site: Optional[int], d_max: Optional[int]):
    if site is None or d_max is None:
        return []
    table = correlator_profile(rho, graph, site, d_max)
    return [[float(d), float(v.real), float(v.imag)] for d, v in zip(table.d, table.values)]


def meanfield_report(
    state: MeanFieldState,
    graph: LatticeGraph,
    p: ModelParams,
    solver: str = "hf",
    correlator_site: Optional[int] = None,
    d_max: Optional[int] = None,
    provenance: Optional[Dict[str, Any]] = None,
) -> ObservableReport:
    mz = state.spins[:, 2]
    n_z = neel_order(graph, p.S, spins_z=mz)
    return ObservableReport(
        solver=solver,
        n_z=n_z,
        n_z_raw=raw_neel_order(n_z, p.S),
        staggered_magnetization=staggered_magnetization(graph, p.S, mz),
        site_density=state.density.tolist(),
        spin_z=mz.tolist(),
        spin_x=state.spins[:, 0].tolist(),
        correlator=_correlator_rows(state.rho, graph, correlator_site, d_max),
        K_tilde=pairing_average(state.K),
        total_n=state.total_n,
        energy=state.energy,
        omega=state.omega,
        converged=state.converged,
        iterations=state.iterations,
        provenance=provenance or {},
    )


def thermal_energy(spectrum: ManyBodySpectrum, beta: Optional[float], mu: Optional[float] = None) -> float:
    """<H - μ n> over the ensemble"""
    weights = boltzmann_weights(spectrum, beta, mu)
    return float(sum(np.dot(w, spectrum.grand_energies(n, mu)) for n, w in weights.items()))


def ed_report(
    spectrum: ManyBodySpectrum,
    graph: LatticeGraph,
    p: ModelParams,
    beta: Optional[float] = None,
    mu: Optional[float] = None,
    correlator_site: Optional[int] = None,
    d_max: Optional[int] = None,
    provenance: Optional[Dict[str, Any]] = None,
) -> ObservableReport:
    """ED diagnostics; n_z uses true two-point spin correlators"""
    corr = spin_correlations(spectrum, beta, mu, graph.reference_site())
    mz, mx = spin_profile(spectrum, beta, mu)
    rho = one_body_density(spectrum, beta, mu)
    n_z = neel_order(graph, p.S, correlations=corr)
    return ObservableReport(
        solver="ed",
        n_z=n_z,
        n_z_raw=raw_neel_order(n_z, p.S),
        staggered_magnetization=staggered_magnetization(graph, p.S, mz),
        site_density=np.real(np.diag(rho)).tolist(),
        spin_z=mz.tolist(),
        spin_x=mx.tolist(),
        correlator=_correlator_rows(rho, graph, correlator_site, d_max),
        K_tilde=0.0,
        total_n=float(np.real(np.trace(rho))),
        energy=thermal_energy(spectrum, beta, mu),
        provenance=provenance or {},
    )


def charge_density_profile(state: MeanFieldState, graph: LatticeGraph) -> Dict[str, list]:
    """Per-site density and spin arrows for phase-diagram snapshots"""
    return {
        "x_nm": graph.positions[:, 0].tolist(),
        "y_nm": graph.positions[:, 1].tolist(),
        "density": state.density.tolist(),
        "spin_x": state.spins[:, 0].tolist(),
        "spin_z": state.spins[:, 2].tolist(),
    }
