"""Physical couplings, laboratory-knob conversions and per-site coefficients"""
from .params import (
    ModelParams,
    PinningPattern,
    RegimeReport,
    SitePotentials,
    TunnelingProfile,
    coulomb_over_hopping,
    dimensionless_regime,
    fit_tunneling_profile,
    load_orientation_profiles,
    pinning_field,
    site_potentials,
    stark_shifted_g,
    tunneling_profile,
    zeeman_energy,
)

__all__ = [
    "ModelParams",
    "PinningPattern",
    "RegimeReport",
    "SitePotentials",
    "TunnelingProfile",
    "coulomb_over_hopping",
    "dimensionless_regime",
    "fit_tunneling_profile",
    "load_orientation_profiles",
    "pinning_field",
    "site_potentials",
    "stark_shifted_g",
    "tunneling_profile",
    "zeeman_energy",
]
