from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class InitialGuess(str, Enum):
    STAGGERED = "staggered"
    UNIFORM = "uniform"
    RANDOM = "random"
    PINNED = "pinned"


class SolverConfig(BaseModel):
    """Self-consistency controls shared by the HF and FTHFB solvers"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    mixing: float = Field(default=0.5, gt=0, le=1)
    tolerance: float = Field(default=1e-10, gt=0)
    max_iterations: int = Field(default=5000, ge=1)
    restarts: int = Field(default=3, ge=1)
    seed: int = 0
    initial_guess: InitialGuess = InitialGuess.STAGGERED
    fock: bool = True
    pairing: bool = False
    pairing_seed: float = Field(default=1e-3, ge=0)
    n_electrons: Optional[int] = Field(default=None, ge=0)
    stagger_reduction: float = Field(default=0.1, ge=0, lt=1)


@dataclass
class MeanFieldState:
    """Converged (or last) iterate of the mean-field cycle.

    rho[i, j] = <c_j† c_i>, K[i, j] = <c_j c_i>. U and V hold the positive
    quasiparticle branch with quasiparticles along rows, so that
    U U† + V V† = 1 and U Vᵀ + V Uᵀ = 0.
    """
    rho: np.ndarray
    K: np.ndarray
    spins: np.ndarray
    U: np.ndarray
    V: np.ndarray
    E_qp: np.ndarray
    occupations: np.ndarray
    omega: float
    energy: float
    mu: float
    beta: Optional[float]
    iterations: int = 0
    converged: bool = False
    omega_trace: List[float] = field(default_factory=list)
    flags: Dict[str, int] = field(default_factory=dict)
    guess: str = ""

    @property
    def n_sites(self) -> int:
        return self.rho.shape[0]

    @property
    def density(self) -> np.ndarray:
        return np.real(np.diag(self.rho))

    @property
    def total_n(self) -> float:
        return float(np.real(np.trace(self.rho)))

    def flag(self, name: str, count: int = 1) -> None:
        self.flags[name] = self.flags.get(name, 0) + count
