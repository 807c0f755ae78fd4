"""Dopant Lattice - nuclear-spin Jackiw-Rebbi simulations for donor arrays in silicon"""
__version__ = "1.0.0"

# Package-level imports for convenience
from .config import RunConfig, load_config
from .lattice import build_lattice
from .model import ModelParams
from .solvers import get_solver_backend

__all__ = ["RunConfig", "load_config", "build_lattice", "ModelParams", "get_solver_backend", "__version__"]
