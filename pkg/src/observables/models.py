from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

NZ_SLACK = 1e-9


class ObservableReport(BaseModel):
    """Diagnostics of one solver run; ``to_row`` is the flat CSV view"""
    solver: str
    n_z: float = Field(ge=-1 - NZ_SLACK, le=1 + NZ_SLACK)
    n_z_raw: float
    staggered_magnetization: float
    site_density: List[float]
    spin_z: List[float]
    spin_x: List[float] = Field(default_factory=list)
    correlator: List[List[float]] = Field(default_factory=list)
    K_tilde: float = Field(default=0.0, ge=0)
    total_n: float
    energy: float
    omega: Optional[float] = None
    converged: bool = True
    iterations: Optional[int] = None
    provenance: Dict[str, Any] = Field(default_factory=dict)

    @property
    def abs_n_z(self) -> float:
        return abs(self.n_z)

    def to_row(self) -> Dict[str, Any]:
        density = np.asarray(self.site_density)
        return {
            "solver": self.solver,
            "n_z": self.n_z,
            "abs_n_z": self.abs_n_z,
            "n_z_raw": self.n_z_raw,
            "staggered_magnetization": self.staggered_magnetization,
            "K_tilde": self.K_tilde,
            "total_n": self.total_n,
            "energy": self.energy,
            "omega": self.omega,
            "density_min": float(density.min()) if density.size else None,
            "density_max": float(density.max()) if density.size else None,
            "converged": self.converged,
            "iterations": self.iterations,
        }
