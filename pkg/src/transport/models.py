from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class ProbeSetup(BaseModel):
    """Source/drain coupling: probe site lists, bare rate Γ (meV) and temperatures (mK)"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    left_sites: List[int]
    right_sites: List[int]
    gamma: float = Field(default=1.0, gt=0)
    reservoir_temperature_mk: float = Field(default=10.0, gt=0)
    island_temperature_mk: float = Field(default=0.01, gt=0)

    @model_validator(mode="after")
    def _check_sites(self) -> "ProbeSetup":
        if not self.left_sites or not self.right_sites:
            raise ValueError("probe site lists must be non-empty")
        if set(self.left_sites) & set(self.right_sites):
            raise ValueError(f"left and right probes share sites {sorted(set(self.left_sites) & set(self.right_sites))}")
        if min(self.left_sites + self.right_sites) < 0:
            raise ValueError("probe sites must be non-negative")
        return self

    @property
    def sites(self) -> List[int]:
        return sorted(set(self.left_sites) | set(self.right_sites))

    def swapped(self) -> "ProbeSetup":
        return self.model_copy(update={"left_sites": self.right_sites, "right_sites": self.left_sites})


class ConductanceCurve(BaseModel):
    """Linear conductance over a μ grid; ``g_raw`` is in units of G_{0,T}·meV"""
    mu: List[float]
    g_raw: List[float]
    peaks: List[int] = Field(default_factory=list)
    half_widths: List[float] = Field(default_factory=list)
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_values(self) -> "ConductanceCurve":
        g = np.asarray(self.g_raw, dtype=float)
        if len(self.mu) != g.size:
            raise ValueError("mu and g_raw lengths differ")
        if not np.all(np.isfinite(g)) or np.any(g < 0):
            raise ValueError("conductance must be finite and non-negative")
        return self

    @property
    def g_normalized(self) -> List[float]:
        g = np.asarray(self.g_raw, dtype=float)
        peak = g.max() if g.size else 0.0
        return (g / peak).tolist() if peak > 0 else g.tolist()

    @property
    def peak_positions(self) -> List[float]:
        return [self.mu[i] for i in self.peaks]

    def to_rows(self) -> List[Dict[str, Any]]:
        flags = set(self.peaks)
        return [
            {**self.metadata, "mu": m, "G_raw": g, "G_normalized": gn, "peak": i in flags}
            for i, (m, g, gn) in enumerate(zip(self.mu, self.g_raw, self.g_normalized))
        ]
