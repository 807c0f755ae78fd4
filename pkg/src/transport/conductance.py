from typing import Dict, List, Optional, Sequence

import numpy as np
from loguru import logger
from scipy.special import expit

from ..ed import ManyBodySpectrum, addition_energies, diagonalize
from ..lattice import LatticeGraph
from ..model import ModelParams, PinningPattern
from .models import ConductanceCurve, ProbeSetup
from .rates import BOLTZMANN_MEV_PER_K, RateTensors, mk_to_beta, stationary_weights, tunneling_rates

PEAK_THRESHOLD = 0.01
DEFAULT_POINTS = 801
GRID_MARGIN_KT = 20.0


def harmonic_rates(rates: RateTensors) -> Dict[int, np.ndarray]:
    """Q = Γ^L Γ^R / (Γ^L + Γ^R), zero where both rates vanish"""
    out = {}
    for n, (gl, gr) in rates.items():
        total = gl + gr
        out[n] = np.divide(gl * gr, total, out=np.zeros_like(total), where=total > 0)
    return out


def linear_conductance(
    spectrum: ManyBodySpectrum,
    probe: ProbeSetup,
    mu: float,
    rates: Optional[RateTensors] = None,
    Q: Optional[Dict[int, np.ndarray]] = None,
) -> float:
    """G / G_{0,T} at chemical potential μ (meV).

    Island weights use the island temperature, the Fermi factor the
    reservoir temperature.
    """
    if Q is None:
        Q = harmonic_rates(rates if rates is not None else tunneling_rates(spectrum, probe))
    beta_r = mk_to_beta(probe.reservoir_temperature_mk)
    P = stationary_weights(spectrum, mk_to_beta(probe.island_temperature_mk), mu)
    G = 0.0
    for n, q in Q.items():
        weights = P.get(n)
        if weights is None or not weights.any():
            continue
        dE = spectrum.bare_energies(n)[:, None] - spectrum.bare_energies(n - 1)[None, :] - mu
        # 1 - f(x) = 1 / (1 + exp(-βx))
        G += float(np.sum(q * weights[:, None] * expit(beta_r * dE)))
    return G


def extract_peaks(mu: Sequence[float], G: Sequence[float], threshold: float = PEAK_THRESHOLD) -> List[int]:
    """Indices of interior local maxima above ``threshold`` times the global maximum"""
    G = np.asarray(G, dtype=float)
    if G.size < 3 or G.max() <= 0:
        return []
    floor = threshold * G.max()
    interior = np.arange(1, G.size - 1)
    mask = (G[interior] > G[interior - 1]) & (G[interior] >= G[interior + 1]) & (G[interior] > floor)
    return interior[mask].tolist()


def _crossing(mu: np.ndarray, G: np.ndarray, start: int, step: int, half: float) -> Optional[float]:
    i = start
    while 0 <= i + step < G.size:
        j = i + step
        if G[j] < half:
            return float(mu[i] + (half - G[i]) * (mu[j] - mu[i]) / (G[j] - G[i]))
        i = j
    return None


def peak_half_widths(mu: Sequence[float], G: Sequence[float], peaks: Sequence[int]) -> List[float]:
    """Half width at half maximum per peak; one-sided when the other side never drops below half"""
    mu = np.asarray(mu, dtype=float)
    G = np.asarray(G, dtype=float)
    widths = []
    for p in peaks:
        half = 0.5 * G[p]
        left = _crossing(mu, G, p, -1, half)
        right = _crossing(mu, G, p, 1, half)
        if left is not None and right is not None:
            widths.append((right - left) / 2)
        elif left is not None or right is not None:
            edge = left if left is not None else right
            widths.append(abs(mu[p] - edge))
        else:
            widths.append(float("nan"))
    return widths


def probe_from_columns(graph: LatticeGraph, gamma: float = 1.0, **temperatures) -> ProbeSetup:
    left, right = graph.columns()
    return ProbeSetup(left_sites=left, right_sites=right, gamma=gamma, **temperatures)


def default_mu_grid(spectrum: ManyBodySpectrum, probe: ProbeSetup, points: int = DEFAULT_POINTS) -> np.ndarray:
    """``points`` samples within 20 k_B T of every addition energy.

    Resonances are mK wide while their spacing is set by t and V0, so one
    window per resonance resolves each line shape.
    """
    energies = sorted(addition_energies(spectrum).values())
    kT = BOLTZMANN_MEV_PER_K * 1e-3 * max(probe.reservoir_temperature_mk, probe.island_temperature_mk)
    windows = [np.linspace(E - GRID_MARGIN_KT * kT, E + GRID_MARGIN_KT * kT, points) for E in energies]
    return np.unique(np.concatenate(windows))


def conductance_curve(
    spectrum: ManyBodySpectrum,
    probe: ProbeSetup,
    mu_grid: Optional[Sequence[float]] = None,
    metadata: Optional[Dict] = None,
) -> ConductanceCurve:
    mu_grid = default_mu_grid(spectrum, probe) if mu_grid is None else np.asarray(mu_grid, dtype=float)
    Q = harmonic_rates(tunneling_rates(spectrum, probe))
    G = np.array([linear_conductance(spectrum, probe, mu, Q=Q) for mu in mu_grid])
    peaks = extract_peaks(mu_grid, G)
    meta = {
        "reservoir_temperature_mk": probe.reservoir_temperature_mk,
        "island_temperature_mk": probe.island_temperature_mk,
        **(metadata or {}),
    }
    return ConductanceCurve(
        mu=mu_grid.tolist(),
        g_raw=G.tolist(),
        peaks=peaks,
        half_widths=peak_half_widths(mu_grid, G, peaks),
        metadata=meta,
    )


def conductance_sweep(
    graph: LatticeGraph,
    p: ModelParams,
    probe: ProbeSetup,
    mu_grid: Optional[Sequence[float]],
    h_z_list: Sequence[float],
    pinning: Optional[PinningPattern] = None,
    **diag_kwargs,
) -> List[ConductanceCurve]:
    """One ED spectrum and conductance curve per Zeeman field h_z (meV)"""
    curves = []
    for h_z in h_z_list:
        p_h = p.model_copy(update={"h_z": float(h_z)})
        spectrum = diagonalize(graph, p_h, pinning, edge_sites=probe.sites, **diag_kwargs)
        curve = conductance_curve(spectrum, probe, mu_grid, metadata={"h_z": float(h_z), "g": p.g})
        logger.info(f"h_z={h_z:.4g} meV: {len(curve.peaks)} conductance peaks")
        curves.append(curve)
    return curves
