import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..errors import ModelError
from ..lattice import Geometry, LatticeGraph, coulomb_matrix

STARK_COEFFICIENT = 2.8e-3
ALLOWED_SPINS = tuple(0.5 * k for k in range(1, 10))


class ModelParams(BaseModel):
    """Couplings of the spin-polarized dopant-lattice Hamiltonian.

    Energies are in meV except ``g`` (μeV). ``beta`` is in 1/meV; ``None``
    is the zero-temperature sentinel.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    t: float = Field(default=7.5, gt=0)
    g: float = 0.48
    S: float = 0.5
    h_z: float = 0.0
    h_x: float = 0.0
    mu: float = 0.0
    mu_site: Optional[Tuple[float, ...]] = None
    V0: float = Field(default=123.0, ge=0)
    screening: float = Field(default=0.0, ge=0)
    beta: Optional[float] = Field(default=None, gt=0)
    filling: Optional[float] = Field(default=None, gt=0, lt=1)
    neutral_background: bool = False

    @field_validator("S")
    @classmethod
    def _half_integer_spin(cls, v: float) -> float:
        if not any(abs(v - s) < 1e-12 for s in ALLOWED_SPINS):
            raise ValueError(f"S must be one of 1/2, 1, ..., 9/2, got {v}")
        return v

    @property
    def g_mev(self) -> float:
        return self.g * 1e-3

    @property
    def spin_dim(self) -> int:
        return int(round(2 * self.S)) + 1

    @property
    def zero_temperature(self) -> bool:
        return self.beta is None


class RegimeReport(BaseModel):
    gS_over_t: float
    hzS_over_t: float
    hxS_over_t: float
    detuning_ok: bool
    neel_window_hint: bool
    ordering_sign_ok: bool
    h_z_tesla: Optional[float] = None
    h_x_tesla: Optional[float] = None

    def summary(self) -> str:
        line = (
            f"gS/t = {self.gS_over_t:.4g}, h_zS/t = {self.hzS_over_t:.4g}, h_xS/t = {self.hxS_over_t:.4g}, "
            f"detuning_ok = {self.detuning_ok}, neel_window_hint = {self.neel_window_hint}"
        )
        if self.h_z_tesla is not None:
            line += f", h_z = {self.h_z_tesla:.4g} T"
        return line


class TunnelingProfile(BaseModel):
    """Calibrated exponential hopping t(a) = t_ref exp(-(a - a_ref)/xi)"""
    model_config = ConfigDict(frozen=True)

    t_ref: float = Field(default=7.5, gt=0)
    a_ref: float = Field(default=4.7, gt=0)
    xi: float = 2.5
    orientation: str = "default"


@dataclass(frozen=True)
class PinningPattern:
    """Staggered pinning field reversed on sites [first_site, first_site + d)"""
    first_site: int
    d: int
    epsilon: float


@dataclass(frozen=True)
class SitePotentials:
    mu: np.ndarray
    epsilon: np.ndarray


def stark_shifted_g(g0: float, E_field: float) -> float:
    return g0 * (1.0 + STARK_COEFFICIENT * E_field ** 2)


def tunneling_profile(a: float, profile: TunnelingProfile = TunnelingProfile()) -> float:
    if profile.xi <= 0:
        raise ModelError(f"decay length must be positive, got {profile.xi}")
    if a <= 0:
        raise ModelError(f"lattice constant must be positive, got {a}")
    return profile.t_ref * math.exp(-(a - profile.a_ref) / profile.xi)


def fit_tunneling_profile(
    point1: Tuple[float, float], point2: Tuple[float, float], orientation: str = "fitted"
) -> TunnelingProfile:
    """Exponential through two (a, t) calibration points"""
    (a1, t1), (a2, t2) = point1, point2
    if t1 <= 0 or t2 <= 0 or a1 == a2:
        raise ModelError("need two distinct lattice constants with positive hopping")
    xi = (a2 - a1) / math.log(t1 / t2)
    if xi <= 0:
        raise ModelError("calibration points do not decay with distance")
    return TunnelingProfile(t_ref=t1, a_ref=a1, xi=xi, orientation=orientation)


def load_orientation_profiles(path: Union[str, Path]) -> Dict[str, TunnelingProfile]:
    """Per-orientation calibrations from ``{"100": {"t_ref": .., "a_ref": .., "xi": ..}, ...}``"""
    raw = json.loads(Path(path).read_text())
    return {name: TunnelingProfile(orientation=name, **entry) for name, entry in raw.items()}


def zeeman_energy(field_tesla: float, gyromagnetic_mev_per_tesla: float) -> float:
    return field_tesla * gyromagnetic_mev_per_tesla


def coulomb_over_hopping(V0: float, a: float, t: float) -> float:
    return V0 / (a * t)


def dimensionless_regime(p: ModelParams, gyromagnetic_mev_per_tesla: Optional[float] = None) -> RegimeReport:
    gS = p.g_mev * p.S / p.t
    hz = p.h_z * p.S / p.t
    hx = p.h_x * p.S / p.t
    detuning_ok = abs(p.h_z) >= 10.0 * abs(p.h_x)
    lo, hi = sorted((abs(gS), abs(hz)))
    comparable = lo > 0 and hi <= 10.0 * lo
    tesla = gyromagnetic_mev_per_tesla
    return RegimeReport(
        gS_over_t=gS,
        hzS_over_t=hz,
        hxS_over_t=hx,
        detuning_ok=detuning_ok,
        neel_window_hint=bool(detuning_ok and comparable),
        ordering_sign_ok=bool(p.g * p.h_z < 0),
        h_z_tesla=p.h_z / tesla if tesla else None,
        h_x_tesla=p.h_x / tesla if tesla else None,
    )


def pinning_field(n_sites: int, pinning: PinningPattern) -> np.ndarray:
    """ε_i(d): ε(-1)^(i+1) outside the pinned segment, reversed inside (0-based i)"""
    i0, d = pinning.first_site, pinning.d
    if d < 0 or i0 < 0 or i0 + d > n_sites:
        raise ModelError(f"pinning segment [{i0}, {i0 + d}) does not fit {n_sites} sites")
    sites = np.arange(n_sites)
    sign = np.where(sites % 2 == 0, -1.0, 1.0)
    inside = (sites >= i0) & (sites < i0 + d)
    sign[inside] *= -1.0
    return pinning.epsilon * sign


def site_potentials(
    p: ModelParams, graph: LatticeGraph, pinning: Optional[PinningPattern] = None
) -> SitePotentials:
    if p.mu_site is not None:
        if len(p.mu_site) != graph.n_sites:
            raise ModelError(f"mu_site has {len(p.mu_site)} entries for {graph.n_sites} sites")
        mu = np.asarray(p.mu_site, dtype=float)
    else:
        mu = np.full(graph.n_sites, p.mu)
    if p.neutral_background and p.V0 > 0:
        mu = mu + coulomb_matrix(graph, p.V0, p.screening).background()
    if pinning is None:
        return SitePotentials(mu=mu, epsilon=np.zeros(graph.n_sites))
    if graph.geometry is Geometry.HONEYCOMB:
        raise ModelError("pinning patterns are defined for chain and square arrays only")
    return SitePotentials(mu=mu, epsilon=pinning_field(graph.n_sites, pinning))
