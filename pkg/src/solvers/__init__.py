"""Solver backends behind a common evaluate() interface"""
from .base import (
    EDBackend,
    FTHFBBackend,
    HartreeFockBackend,
    SolverBackend,
    SolverKind,
    SolverResult,
    electrons_for_filling,
    get_solver_backend,
)

__all__ = [
    "EDBackend",
    "FTHFBBackend",
    "HartreeFockBackend",
    "SolverBackend",
    "SolverKind",
    "SolverResult",
    "electrons_for_filling",
    "get_solver_backend",
]
