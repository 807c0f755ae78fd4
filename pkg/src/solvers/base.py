from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

from loguru import logger

from ..ed import DEFAULT_DIMENSION_CAP, ManyBodySpectrum, diagonalize
from ..ed.spectrum import DENSE_CUTOFF
from ..errors import ConfigError
from ..lattice import LatticeGraph
from ..meanfield import MeanFieldState, SolverConfig, solve, tune_chemical_potential
from ..model import ModelParams, PinningPattern
from ..observables import ObservableReport, ed_report, meanfield_report


class SolverKind(str, Enum):
    ED = "ed"
    HF = "hf"
    FTHFB = "fthfb"


@dataclass
class SolverResult:
    report: ObservableReport
    state: Optional[MeanFieldState] = None
    spectrum: Optional[ManyBodySpectrum] = None
    params: Optional[ModelParams] = None
    extras: Dict[str, Any] = field(default_factory=dict)


class SolverBackend(ABC):
    kind: SolverKind

    @abstractmethod
    def evaluate(
        self,
        graph: LatticeGraph,
        p: ModelParams,
        cfg: SolverConfig,
        pinning: Optional[PinningPattern] = None,
        initial: Optional[MeanFieldState] = None,
        correlator_site: Optional[int] = None,
        d_max: Optional[int] = None,
    ) -> SolverResult:
        pass


class EDBackend(SolverBackend):
    kind = SolverKind.ED

    def __init__(self, cap: int = DEFAULT_DIMENSION_CAP, dense_cutoff: int = DENSE_CUTOFF, workers: Optional[int] = None):
        self.cap = cap
        self.dense_cutoff = dense_cutoff
        self.workers = workers

    def evaluate(self, graph, p, cfg, pinning=None, initial=None, correlator_site=None, d_max=None) -> SolverResult:
        spectrum = diagonalize(graph, p, pinning, cap=self.cap, dense_cutoff=self.dense_cutoff, workers=self.workers)
        report = ed_report(spectrum, graph, p, p.beta, None, correlator_site, d_max)
        return SolverResult(report=report, spectrum=spectrum, params=p)


def electrons_for_filling(filling: float, n_sites: int) -> int:
    """filling·N rounded half up, so odd lattices at half filling carry the extra electron"""
    return int(filling * n_sites + 0.5)


class HartreeFockBackend(SolverBackend):
    """Zero-temperature Hartree-Fock: no pairing channel, β ignored.

    A configured filling fixes the electron number (aufbau) unless the
    solver config already sets one; otherwise the run is grand-canonical at p.mu.
    """
    kind = SolverKind.HF

    def evaluate(self, graph, p, cfg, pinning=None, initial=None, correlator_site=None, d_max=None) -> SolverResult:
        p_run = p.model_copy(update={"beta": None})
        update: Dict[str, Any] = {"pairing": False}
        if p.filling is not None and cfg.n_electrons is None:
            update["n_electrons"] = electrons_for_filling(p.filling, graph.n_sites)
        state = solve(graph, p_run, cfg.model_copy(update=update), pinning, initial)
        report = meanfield_report(state, graph, p_run, "hf", correlator_site, d_max)
        return SolverResult(report=report, state=state, params=p_run)


class FTHFBBackend(SolverBackend):
    """Finite-temperature HFB with a seeded pairing channel; μ tuned when a filling is set"""
    kind = SolverKind.FTHFB

    def evaluate(self, graph, p, cfg, pinning=None, initial=None, correlator_site=None, d_max=None) -> SolverResult:
        run_cfg = cfg.model_copy(update={"pairing": True, "n_electrons": None})
        if p.filling is not None:
            mu = tune_chemical_potential(graph, p, run_cfg, p.filling * graph.n_sites, pinning)
            p = p.model_copy(update={"mu": mu})
        state = solve(graph, p, run_cfg, pinning, initial)
        report = meanfield_report(state, graph, p, "fthfb", correlator_site, d_max)
        return SolverResult(report=report, state=state, params=p)


def get_solver_backend(kind, **options) -> SolverBackend:
    """Factory function - ED options (cap, dense_cutoff, workers) are ignored by mean-field backends"""
    try:
        kind = SolverKind(str(getattr(kind, "value", kind)).lower())
    except ValueError:
        raise ConfigError(f"Unknown solver backend: {kind}", key="solver") from None

    if kind is SolverKind.ED:
        return EDBackend(**{k: v for k, v in options.items() if v is not None})
    if options:
        logger.debug(f"Ignoring ED options {sorted(options)} for {kind.value}")
    if kind is SolverKind.HF:
        return HartreeFockBackend()
    return FTHFBBackend()
