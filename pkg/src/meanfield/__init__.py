"""Hartree-Fock and finite-temperature Hartree-Fock-Bogoliubov solvers with classical nuclear spins"""
from .state import InitialGuess, MeanFieldState, SolverConfig
from .fields import LatticeProblem, mean_fields
from .bogoliubov import BogoliubovResult, aufbau_step, bogoliubov_step, fermi_dirac, fermion_entropy
from .spins import brillouin_magnetization, effective_fields, spin_log_partition, spin_update
from .solver import check_invariants, fixed_point_residual, grand_potential, iterate, omega_monotone, solve
from .chemical_potential import occupation_curve, tune_chemical_potential
from .checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    "InitialGuess",
    "MeanFieldState",
    "SolverConfig",
    "LatticeProblem",
    "mean_fields",
    "BogoliubovResult",
    "aufbau_step",
    "bogoliubov_step",
    "fermi_dirac",
    "fermion_entropy",
    "brillouin_magnetization",
    "effective_fields",
    "spin_log_partition",
    "spin_update",
    "check_invariants",
    "fixed_point_residual",
    "grand_potential",
    "iterate",
    "omega_monotone",
    "solve",
    "occupation_curve",
    "tune_chemical_potential",
    "load_checkpoint",
    "save_checkpoint",
]
