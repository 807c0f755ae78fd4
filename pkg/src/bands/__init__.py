"""Tight-binding dispersions, nesting and Dirac-cone checks"""
from .dispersion import (
    DispersionGrid,
    chain_dispersion,
    chain_fermi_velocity,
    gap_from_state,
    gapped_square_spectrum,
    honeycomb_bands,
    honeycomb_dirac_point,
    honeycomb_fermi_velocity,
    nesting_check,
    real_space_free_spectrum,
    reciprocal_vectors,
    square_dispersion,
)
from .grids import fermi_surface_locus, honeycomb_band_table, monkhorst_pack, square_band_table

__all__ = [
    "DispersionGrid",
    "chain_dispersion",
    "chain_fermi_velocity",
    "gap_from_state",
    "gapped_square_spectrum",
    "honeycomb_bands",
    "honeycomb_dirac_point",
    "honeycomb_fermi_velocity",
    "nesting_check",
    "real_space_free_spectrum",
    "reciprocal_vectors",
    "square_dispersion",
    "fermi_surface_locus",
    "honeycomb_band_table",
    "monkhorst_pack",
    "square_band_table",
]
