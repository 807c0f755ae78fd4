"""Linear-response conductance of the dopant island between two probes"""
from .models import ConductanceCurve, ProbeSetup
from .rates import BOLTZMANN_MEV_PER_K, mk_to_beta, probe_rates, stationary_weights, tunneling_rates
from .conductance import (
    conductance_curve,
    conductance_sweep,
    default_mu_grid,
    extract_peaks,
    harmonic_rates,
    linear_conductance,
    peak_half_widths,
    probe_from_columns,
)

__all__ = [
    "ConductanceCurve",
    "ProbeSetup",
    "BOLTZMANN_MEV_PER_K",
    "mk_to_beta",
    "probe_rates",
    "stationary_weights",
    "tunneling_rates",
    "conductance_curve",
    "conductance_sweep",
    "default_mu_grid",
    "extract_peaks",
    "harmonic_rates",
    "linear_conductance",
    "peak_half_widths",
    "probe_from_columns",
]
