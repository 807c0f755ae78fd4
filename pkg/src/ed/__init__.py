"""Exact diagonalization of the fermion ⊗ nuclear-spin lattice Hamiltonian"""
from .basis import ManyBodyBasis, fermion_operators, sector_states, spin_operators
from .hamiltonian import DEFAULT_DIMENSION_CAP, build_hamiltonian, build_sector_hamiltonian, sector_dimension
from .spectrum import (
    GroundState,
    ManyBodySpectrum,
    addition_energies,
    degeneracy_tolerance,
    diagonalize,
    ground_state,
    load_spectrum,
    save_spectrum,
)
from .thermal import (
    boltzmann_weights,
    ensemble_average,
    hopping_operator,
    number_operator,
    one_body_density,
    site_density_operator,
    spin_correlations,
    spin_profile,
    spin_x_operator,
    spin_z_operator,
    spin_zz_operator,
    thermal_expectation,
    total_charge_profile,
)

__all__ = [
    "ManyBodyBasis",
    "fermion_operators",
    "sector_states",
    "spin_operators",
    "DEFAULT_DIMENSION_CAP",
    "build_hamiltonian",
    "build_sector_hamiltonian",
    "sector_dimension",
    "GroundState",
    "ManyBodySpectrum",
    "addition_energies",
    "degeneracy_tolerance",
    "diagonalize",
    "ground_state",
    "load_spectrum",
    "save_spectrum",
    "boltzmann_weights",
    "ensemble_average",
    "hopping_operator",
    "number_operator",
    "one_body_density",
    "site_density_operator",
    "spin_correlations",
    "spin_profile",
    "spin_x_operator",
    "spin_z_operator",
    "spin_zz_operator",
    "thermal_expectation",
    "total_charge_profile",
]
