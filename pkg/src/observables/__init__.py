"""Néel order, correlators, pairing average, CDW fits and static potentials"""
from .models import ObservableReport
from .neel import neel_order, pairing_average, raw_neel_order, staggered_magnetization
from .correlators import CorrelatorTable, correlator_profile, free_chain_correlator
from .fitting import CdwFit, FamilyFit, cdw_fit, exponential_model, oscillatory_model, spearman_monotonicity
from .confinement import FractionalCharge, default_separations, fractional_density_check, static_potential
from .report import charge_density_profile, ed_report, meanfield_report, thermal_energy

__all__ = [
    "ObservableReport",
    "neel_order",
    "pairing_average",
    "raw_neel_order",
    "staggered_magnetization",
    "CorrelatorTable",
    "correlator_profile",
    "free_chain_correlator",
    "CdwFit",
    "FamilyFit",
    "cdw_fit",
    "exponential_model",
    "oscillatory_model",
    "spearman_monotonicity",
    "FractionalCharge",
    "default_separations",
    "fractional_density_check",
    "static_potential",
    "charge_density_profile",
    "ed_report",
    "meanfield_report",
    "thermal_energy",
]
