from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Awaitable, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from ..bands import (
    chain_dispersion,
    chain_fermi_velocity,
    fermi_surface_locus,
    honeycomb_band_table,
    honeycomb_fermi_velocity,
    nesting_check,
    square_band_table,
)
from ..config import RunConfig
from ..ed import addition_energies, diagonalize, save_spectrum, total_charge_profile
from ..errors import FitError, ObservableError
from ..lattice import Boundary, Geometry, LatticeGraph
from ..model import dimensionless_regime
from ..observables import cdw_fit, static_potential
from ..solvers import get_solver_backend
from ..transport import conductance_curve, default_mu_grid, probe_from_columns
from .outputs import long_format
from .sweep import SweepSpec, grid_points, run_sweep


class Subcommand(str, Enum):
    PHASE_DIAGRAM = "phase-diagram"
    CONFINEMENT = "confinement"
    CHARGE_PROFILE = "charge-profile"
    CONDUCTANCE = "conductance"
    BANDS = "bands"
    CORRELATORS = "correlators"
    REGIME = "regime"
    ED_SPECTRUM = "ed-spectrum"


@dataclass
class CommandResult:
    tables: Dict[str, Tuple[pd.DataFrame, Optional[Dict[str, Any]]]] = field(default_factory=dict)
    files: List[Path] = field(default_factory=list)
    converged: bool = True
    message: Optional[str] = None


Handler = Callable[[RunConfig, LatticeGraph, Path, int], Awaitable[CommandResult]]


def _ed_options(config: RunConfig) -> Dict[str, int]:
    return {"cap": config.ed_cap, "dense_cutoff": config.ed_dense_cutoff}


async def regime_command(config: RunConfig, graph: LatticeGraph, out_dir: Path, workers: int) -> CommandResult:
    report = dimensionless_regime(config.model_params(), config.gyromagnetic_mev_per_tesla)
    frame = pd.DataFrame([report.model_dump()])
    return CommandResult(tables={"regime": (frame, None)}, message=report.summary())


async def phase_diagram_command(config: RunConfig, graph: LatticeGraph, out_dir: Path, workers: int) -> CommandResult:
    spec = SweepSpec.from_config(config, workers)
    frame = await run_sweep(config, spec)
    ids = ["index", *(a.name for a in spec.axes), "converged", "error"]
    long = long_format(frame, ids, spec.observables)
    sidecar = {
        "axes": [a.model_dump(mode="json") for a in spec.axes],
        "solver": spec.solver.value,
        "rows": frame.to_dict(orient="records"),
    }
    converged = bool(frame["converged"].fillna(False).astype(bool).all())
    return CommandResult(tables={"phase_diagram": (long, sidecar)}, converged=converged)


async def confinement_command(config: RunConfig, graph: LatticeGraph, out_dir: Path, workers: int) -> CommandResult:
    table = static_potential(
        graph,
        config.model_params(),
        config.solver_config(),
        config.pinning_first_site,
        config.separations,
        config.pinning_epsilon_over_t,
        config.extra_electrons,
    )
    sidecar = {"spearman": table.attrs["spearman"], "verdict": table.attrs["verdict"]}
    return CommandResult(
        tables={"static_potential": (table, sidecar)},
        converged=bool(table["converged"].all()),
        message=f"V(d) {sidecar['verdict']} (Spearman {sidecar['spearman']:.3f})",
    )


async def charge_profile_command(config: RunConfig, graph: LatticeGraph, out_dir: Path, workers: int) -> CommandResult:
    p = config.model_params()
    couplings = []
    for _, overrides in grid_points(config.sweep_axes):
        point = config.with_overrides(overrides).model_params()
        couplings.append((point.g, point.h_z))
    mu_grid = config.mu_over_t_grid.values() * p.t if config.mu_over_t_grid else np.array([p.mu])
    frame = total_charge_profile(graph, p, p.beta, mu_grid, couplings, **_ed_options(config))
    frame["gs_over_t"] = frame["g"] * 1e-3 * p.S / p.t
    frame["hzs_over_t"] = frame["h_z"] * p.S / p.t
    frame["mu_over_t"] = frame["mu"] / p.t
    return CommandResult(tables={"charge_profile": (frame, {"beta": p.beta})})


async def conductance_command(config: RunConfig, graph: LatticeGraph, out_dir: Path, workers: int) -> CommandResult:
    p = config.model_params()
    fields = [r * p.t / p.S for r in config.hzs_over_t_list] if config.hzs_over_t_list else [p.h_z]
    probes = [
        probe_from_columns(
            graph,
            config.probe_gamma,
            reservoir_temperature_mk=T_r,
            island_temperature_mk=config.island_temperature_mk,
        )
        for T_r in config.reservoir_temperatures_mk
    ]
    widest = max(probes, key=lambda pr: pr.reservoir_temperature_mk)
    frames, summary = [], []
    for h_z in fields:
        p_h = p.model_copy(update={"h_z": h_z})
        spectrum = diagonalize(graph, p_h, edge_sites=widest.sites, workers=workers, **_ed_options(config))
        grid = config.mu_grid.values() if config.mu_grid else default_mu_grid(spectrum, widest, config.conductance_points)
        for probe in probes:
            curve = conductance_curve(
                spectrum, probe, grid, metadata={"h_z": h_z, "hzs_over_t": h_z * p.S / p.t, "g": p.g}
            )
            frames.append(pd.DataFrame(curve.to_rows()))
            summary.append({
                **curve.metadata,
                "peak_mu": curve.peak_positions,
                "half_widths": curve.half_widths,
            })
        summary[-1]["addition_energies"] = addition_energies(spectrum)
    table = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame()
    return CommandResult(tables={"conductance": (table, {"curves": summary})})


async def bands_command(config: RunConfig, graph: LatticeGraph, out_dir: Path, workers: int) -> CommandResult:
    p = config.model_params()
    t, a, n = p.t, config.a, config.bands_resolution
    if config.geometry is Geometry.SQUARE:
        mass = p.g_mev * p.S * config.bands_phi0
        table = square_band_table(t, a, n, mass).to_frame()
        locus = fermi_surface_locus(a)
        nested = all(nesting_check(k, a, t) for k in locus)
        sidecar = {"phi0": config.bands_phi0, "gap": 2 * abs(mass), "gap_numeric": float(2 * table["eps_plus"].min()), "nesting": nested}
        surface = pd.DataFrame(locus, columns=["k_x", "k_y"])
        return CommandResult(tables={"bands": (table, sidecar), "fermi_surface": (surface, None)})
    if config.geometry is Geometry.HONEYCOMB:
        table = honeycomb_band_table(t, a, n).to_frame()
        sidecar = {"v_F": honeycomb_fermi_velocity(t, a), "v_F_expected": 1.5 * t * a}
        return CommandResult(tables={"bands": (table, sidecar)})
    k = (2 * np.arange(1, n + 1) - n - 1) / (2 * n) * (2 * np.pi / a)
    table = pd.DataFrame({"k_x": k, "eps": chain_dispersion(k, t, a)})
    return CommandResult(tables={"bands": (table, {"v_F": chain_fermi_velocity(t, a), "v_F_expected": 2 * t * a})})


async def correlators_command(config: RunConfig, graph: LatticeGraph, out_dir: Path, workers: int) -> CommandResult:
    N, site = graph.n_sites, config.correlator_site
    if config.correlator_dmax is not None:
        d_max = config.correlator_dmax
    else:
        d_max = N // 2 if graph.boundary is Boundary.PERIODIC else N - site - 1
    backend = get_solver_backend(config.solver, **_ed_options(config))
    result = backend.evaluate(
        graph, config.model_params(), config.solver_config(), correlator_site=site, d_max=d_max
    )
    table = pd.DataFrame(result.report.correlator, columns=["d", "re", "im"])
    sidecar: Dict[str, Any] = {"site": site, "solver": config.solver.value}
    try:
        fit = cdw_fit(table["d"].to_numpy(), table["re"].to_numpy())
        sidecar["fit"] = fit.to_row()
    except (ObservableError, FitError) as e:
        logger.warning(f"CDW fit skipped: {e}")
        sidecar["fit_error"] = str(e)
    return CommandResult(tables={"correlators": (table, sidecar)}, converged=result.report.converged)


async def ed_spectrum_command(config: RunConfig, graph: LatticeGraph, out_dir: Path, workers: int) -> CommandResult:
    left, right = graph.columns()
    spectrum = diagonalize(
        graph, config.model_params(), edge_sites=sorted(set(left) | set(right)), workers=workers, **_ed_options(config)
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    path = save_spectrum(spectrum, out_dir / "spectrum")
    table = pd.DataFrame(sorted(addition_energies(spectrum).items()), columns=["n", "addition_energy"])
    return CommandResult(tables={"addition_energies": (table, None)}, files=[path, path.with_suffix(".json")])


COMMANDS: Dict[Subcommand, Handler] = {
    Subcommand.PHASE_DIAGRAM: phase_diagram_command,
    Subcommand.CONFINEMENT: confinement_command,
    Subcommand.CHARGE_PROFILE: charge_profile_command,
    Subcommand.CONDUCTANCE: conductance_command,
    Subcommand.BANDS: bands_command,
    Subcommand.CORRELATORS: correlators_command,
    Subcommand.REGIME: regime_command,
    Subcommand.ED_SPECTRUM: ed_spectrum_command,
}
