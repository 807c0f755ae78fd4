from typing import Dict, Sequence, Tuple

import numpy as np
from scipy.constants import e, k

from ..ed import ManyBodySpectrum, boltzmann_weights
from ..errors import SpectrumError
from .models import ProbeSetup

BOLTZMANN_MEV_PER_K = k / e * 1e3

RateTensors = Dict[int, Tuple[np.ndarray, np.ndarray]]


def mk_to_beta(temperature_mk: float) -> float:
    """1/(k_B T) in 1/meV"""
    if temperature_mk <= 0:
        raise SpectrumError(f"temperature must be positive, got {temperature_mk} mK")
    return 1.0 / (BOLTZMANN_MEV_PER_K * temperature_mk * 1e-3)


def probe_rates(spectrum: ManyBodySpectrum, sites: Sequence[int], gamma: float, n: int) -> np.ndarray:
    """Γ Σ_i |<Ψ_α^(n)| c_i† |Ψ_α'^(n-1)>|² over one probe's sites"""
    return gamma * sum(np.abs(spectrum.creation_elements(i, n)) ** 2 for i in sites)


def tunneling_rates(spectrum: ManyBodySpectrum, probe: ProbeSetup) -> RateTensors:
    """Golden-rule rates per adjacent sector pair, keyed by the upper sector n"""
    rates = {}
    for n in spectrum.sectors:
        if n - 1 not in spectrum.energies:
            continue
        rates[n] = (
            probe_rates(spectrum, probe.left_sites, probe.gamma, n),
            probe_rates(spectrum, probe.right_sites, probe.gamma, n),
        )
    return rates


def stationary_weights(spectrum: ManyBodySpectrum, beta_island: float, mu: float) -> Dict[int, np.ndarray]:
    """Island occupation P_α^(n) ∝ exp(-β(E_α^(n) - nμ)), normalized over all sectors"""
    if beta_island is None or beta_island <= 0:
        raise SpectrumError(f"island beta must be positive, got {beta_island}")
    return boltzmann_weights(spectrum, beta_island, mu)
