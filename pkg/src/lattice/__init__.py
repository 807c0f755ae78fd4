"""Dopant-array geometries, sublattice parity and screened Coulomb matrix"""
from .geometry import (
    Boundary,
    Geometry,
    LatticeGraph,
    build_lattice,
    honeycomb_basis,
    pair_distance,
    pair_distances,
)
from .coulomb import CoulombMatrix, coulomb_matrix

__all__ = [
    "Boundary",
    "Geometry",
    "LatticeGraph",
    "build_lattice",
    "honeycomb_basis",
    "pair_distance",
    "pair_distances",
    "CoulombMatrix",
    "coulomb_matrix",
]
