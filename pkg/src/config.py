from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError
from .lattice import Boundary, Geometry, LatticeGraph, build_lattice
from .meanfield import InitialGuess, SolverConfig
from .model import ModelParams, PinningPattern, TunnelingProfile, tunneling_profile
from .solvers import SolverKind
from .transport import mk_to_beta

DEFAULT_T = 7.5

# Ratio keys resolve against t, a and S; each excludes its absolute partner
RATIO_PARTNERS = {
    "gs_over_t": "g",
    "hzs_over_t": "h_z",
    "hxs_over_t": "h_x",
    "v0_over_at": "v0",
    "mu_over_t": "mu",
}
TEMPERATURE_KEYS = ("beta", "beta_t", "temperature_mk")


class AxisScale(str, Enum):
    LINEAR = "linear"
    LOG = "log"


class SweepAxis(BaseModel):
    """One swept parameter: ``name:min:max:points[:linear|log]``"""
    model_config = ConfigDict(frozen=True)

    name: str
    min: float
    max: float
    points: int = Field(ge=1)
    scale: AxisScale = AxisScale.LINEAR

    @model_validator(mode="after")
    def _check_log(self) -> "SweepAxis":
        if self.scale is AxisScale.LOG and (self.min <= 0 or self.max <= 0):
            raise ValueError(f"log axis {self.name} needs positive bounds")
        return self

    @classmethod
    def parse(cls, text: str) -> "SweepAxis":
        parts = [p.strip() for p in text.split(":")]
        if len(parts) not in (4, 5):
            raise ValueError(f"axis '{text}' must read name:min:max:points[:linear|log]")
        fields = dict(zip(("name", "min", "max", "points", "scale"), parts))
        return cls(**fields)

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.min])
        if self.scale is AxisScale.LOG:
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


def _split(value: Any, sep: str = ",") -> Any:
    if isinstance(value, str):
        return [v.strip() for v in value.split(sep) if v.strip()]
    return value


class RunConfig(BaseModel):
    """Every key a config file may set; keys are case-insensitive, all optional"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    # Lattice
    geometry: Geometry = Geometry.CHAIN
    n_x: int = 43
    n_y: int = 1
    a: float = Field(default=4.7, gt=0)
    boundary: Boundary = Boundary.PERIODIC

    # Model (meV, g in μeV)
    t: Optional[float] = Field(default=None, gt=0)
    g: Optional[float] = None
    s: float = 0.5
    h_z: Optional[float] = None
    h_x: Optional[float] = None
    mu: Optional[float] = None
    v0: Optional[float] = Field(default=None, ge=0)
    screening: float = Field(default=0.0, ge=0)
    beta: Optional[float] = Field(default=None, gt=0)
    beta_t: Optional[float] = Field(default=None, gt=0)
    temperature_mk: Optional[float] = Field(default=None, gt=0)
    filling: Optional[float] = Field(default=None, gt=0, lt=1)
    neutral_background: bool = False
    gyromagnetic_mev_per_tesla: Optional[float] = None
    tunneling_xi: float = Field(default=2.5, gt=0)
    t_from_lattice_constant: bool = False

    # Dimensionless convenience keys
    gs_over_t: Optional[float] = None
    hzs_over_t: Optional[float] = None
    hxs_over_t: Optional[float] = None
    v0_over_at: Optional[float] = None
    mu_over_t: Optional[float] = None

    # Solver
    solver: SolverKind = SolverKind.HF
    mixing: float = Field(default=0.5, gt=0, le=1)
    tolerance: float = Field(default=1e-10, gt=0)
    max_iterations: int = Field(default=5000, ge=1)
    restarts: int = Field(default=3, ge=1)
    seed: int = 0
    initial_guess: InitialGuess = InitialGuess.STAGGERED
    fock: bool = True
    n_electrons: Optional[int] = Field(default=None, ge=0)
    extra_electrons: int = 1
    pairing_seed: float = Field(default=1e-3, ge=0)

    # Sweeps
    sweep_axes: List[SweepAxis] = Field(default_factory=list)
    observables: List[str] = Field(default_factory=lambda: ["n_z", "abs_n_z", "total_n", "energy"])
    warm_start: bool = False

    # Exact diagonalization
    ed_cap: int = Field(default=200_000, ge=1)
    ed_dense_cutoff: int = Field(default=4000, ge=1)

    # Confinement
    pinning_first_site: int = Field(default=5, ge=0)
    pinning_epsilon_over_t: float = 0.05
    separations: Optional[List[int]] = None

    # Transport
    probe_gamma: float = Field(default=1.0, gt=0)
    reservoir_temperatures_mk: List[float] = Field(default_factory=lambda: [10.0, 30.0, 100.0])
    island_temperature_mk: float = Field(default=0.01, gt=0)
    mu_grid: Optional[SweepAxis] = None
    conductance_points: int = Field(default=801, ge=3)
    hzs_over_t_list: Optional[List[float]] = None

    # Charge profile
    mu_over_t_grid: Optional[SweepAxis] = None

    # Bands
    bands_resolution: int = Field(default=256, ge=2)
    bands_phi0: float = 1.0

    # Correlators
    correlator_site: int = Field(default=0, ge=0)
    correlator_dmax: Optional[int] = Field(default=None, ge=0)

    @field_validator("sweep_axes", mode="before")
    @classmethod
    def _parse_axes(cls, v):
        return [SweepAxis.parse(a) if isinstance(a, str) else a for a in _split(v, ";")]

    @field_validator("mu_grid", "mu_over_t_grid", mode="before")
    @classmethod
    def _parse_grid(cls, v):
        if isinstance(v, str):
            return SweepAxis.parse(f"grid:{v}")
        return v

    @field_validator("observables", "separations", "reservoir_temperatures_mk", "hzs_over_t_list", mode="before")
    @classmethod
    def _parse_list(cls, v):
        return _split(v)

    @model_validator(mode="after")
    def _check_exclusive(self) -> "RunConfig":
        for ratio, absolute in RATIO_PARTNERS.items():
            if getattr(self, ratio) is not None and getattr(self, absolute) is not None:
                raise ValueError(f"set either {ratio} or {absolute}, not both")
        if sum(getattr(self, k) is not None for k in TEMPERATURE_KEYS) > 1:
            raise ValueError(f"set at most one of {', '.join(TEMPERATURE_KEYS)}")
        if self.t is not None and self.t_from_lattice_constant:
            raise ValueError("set either t or t_from_lattice_constant")
        numeric = {name for name, f in type(self).model_fields.items() if f.annotation in (float, Optional[float], int)}
        for axis in self.sweep_axes:
            if axis.name not in numeric:
                raise ValueError(f"unknown sweep parameter '{axis.name}'")
        return self

    def with_overrides(self, values: Dict[str, Any]) -> "RunConfig":
        """Copy with swept values applied; setting one key of a ratio/absolute pair clears the other"""
        fields = type(self).model_fields
        update = {
            k: int(round(v)) if k in fields and fields[k].annotation is int else v for k, v in values.items()
        }
        for key in values:
            partner = RATIO_PARTNERS.get(key) or {v: k for k, v in RATIO_PARTNERS.items()}.get(key)
            if partner and partner not in values:
                update[partner] = None
            if key in TEMPERATURE_KEYS:
                update.update({k: None for k in TEMPERATURE_KEYS if k != key and k not in values})
        return self.model_copy(update=update)

    def hopping(self) -> float:
        if self.t is not None:
            return self.t
        if self.t_from_lattice_constant:
            return tunneling_profile(self.a, TunnelingProfile(xi=self.tunneling_xi))
        return DEFAULT_T

    def inverse_temperature(self, t: Optional[float] = None) -> Optional[float]:
        if self.beta is not None:
            return self.beta
        if self.beta_t is not None:
            return self.beta_t / (t or self.hopping())
        if self.temperature_mk is not None:
            return mk_to_beta(self.temperature_mk)
        return None

    def model_params(self) -> ModelParams:
        t, S = self.hopping(), self.s
        defaults = ModelParams()

        def pick(ratio: Optional[float], absolute: Optional[float], scale: float, fallback: float) -> float:
            if ratio is not None:
                return ratio * scale
            return fallback if absolute is None else absolute

        return ModelParams(
            t=t,
            S=S,
            g=pick(self.gs_over_t, self.g, t / S * 1e3, defaults.g),
            h_z=pick(self.hzs_over_t, self.h_z, t / S, defaults.h_z),
            h_x=pick(self.hxs_over_t, self.h_x, t / S, defaults.h_x),
            mu=pick(self.mu_over_t, self.mu, t, defaults.mu),
            V0=pick(self.v0_over_at, self.v0, self.a * t, defaults.V0),
            screening=self.screening,
            beta=self.inverse_temperature(t),
            filling=self.filling,
            neutral_background=self.neutral_background,
        )

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            mixing=self.mixing,
            tolerance=self.tolerance,
            max_iterations=self.max_iterations,
            restarts=self.restarts,
            seed=self.seed,
            initial_guess=self.initial_guess,
            fock=self.fock,
            pairing=self.solver is SolverKind.FTHFB,
            pairing_seed=self.pairing_seed,
            n_electrons=self.n_electrons,
        )

    def build_graph(self) -> LatticeGraph:
        return build_lattice(self.geometry, self.n_x, self.n_y, self.a, self.boundary)

    def pinning(self, d: int) -> PinningPattern:
        return PinningPattern(self.pinning_first_site, d, self.pinning_epsilon_over_t * self.hopping())

    def resolved(self) -> Dict[str, Any]:
        """Config, physical parameters and solver controls as consumed, for the run manifest"""
        return {
            "config": self.model_dump(mode="json"),
            "model": self.model_params().model_dump(mode="json"),
            "solver": self.solver_config().model_dump(mode="json"),
        }


def _wrap(error: ValidationError) -> ConfigError:
    first = error.errors()[0]
    key = ".".join(str(part) for part in first["loc"]) or None
    return ConfigError(first["msg"], key=key)


def parse_config(values: Dict[str, Any]) -> RunConfig:
    cleaned = {k.strip().lower(): v for k, v in values.items() if v is not None and str(v).strip() != ""}
    try:
        return RunConfig.model_validate(cleaned)
    except ValidationError as e:
        raise _wrap(e) from None


def load_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    """Read a KEY=value file without touching os.environ; no path means all defaults"""
    if path is None:
        return RunConfig()
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"cannot read config file {path}", key="config")
    return parse_config(dotenv_values(path))
