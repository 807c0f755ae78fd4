import asyncio
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..config import RunConfig, SweepAxis
from ..errors import SimulationError
from ..solvers import SolverKind, get_solver_backend

GridPoint = Tuple[int, Dict[str, float]]


class SweepSpec(BaseModel):
    """Grid definition plus execution controls for one sweep"""
    model_config = ConfigDict(frozen=True)

    axes: List[SweepAxis] = Field(default_factory=list)
    solver: SolverKind = SolverKind.HF
    observables: List[str] = Field(default_factory=list)
    workers: int = Field(default=1, ge=1)
    seed: int = 0
    warm_start: bool = False

    @classmethod
    def from_config(cls, config: RunConfig, workers: int = 1) -> "SweepSpec":
        return cls(
            axes=config.sweep_axes,
            solver=config.solver,
            observables=config.observables,
            workers=workers,
            seed=config.seed,
            warm_start=config.warm_start,
        )


def grid_points(axes: List[SweepAxis]) -> List[GridPoint]:
    """Cartesian grid, first axis varying slowest; no axes gives one empty point"""
    names = [a.name for a in axes]
    values = [a.values().tolist() for a in axes]
    return [(i, dict(zip(names, combo))) for i, combo in enumerate(product(*values))]


def warm_start_chains(points: List[GridPoint], axes: List[SweepAxis]) -> List[List[GridPoint]]:
    """Group points into chains that step along the first axis at fixed remaining axes"""
    if not axes:
        return [points]
    stride = len(points) // axes[0].points
    return [points[offset::stride] for offset in range(stride)]


def evaluate_chain(config: RunConfig, chain: List[GridPoint], warm_start: bool = False) -> List[Dict[str, Any]]:
    """Run one chain of grid points in order; failures are recorded in-row"""
    backend = get_solver_backend(config.solver, cap=config.ed_cap, dense_cutoff=config.ed_dense_cutoff)
    rows = []
    previous = None
    for index, overrides in chain:
        row: Dict[str, Any] = {"index": index, **overrides}
        try:
            point = config.with_overrides(overrides)
            graph = point.build_graph()
            result = backend.evaluate(
                graph,
                point.model_params(),
                point.solver_config(),
                initial=previous if warm_start else None,
            )
            row.update(result.report.to_row())
            row["error"] = None
            previous = result.state
        except SimulationError as e:
            logger.error(f"Sweep point {index} {overrides} failed: {e}")
            row.update({"converged": False, "error": str(e)})
            previous = None
        rows.append(row)
    return rows


async def run_sweep(config: RunConfig, spec: SweepSpec) -> pd.DataFrame:
    points = grid_points(spec.axes)
    use_chains = spec.warm_start and spec.solver is not SolverKind.ED
    chains = warm_start_chains(points, spec.axes) if use_chains else [[p] for p in points]
    logger.info(f"Sweep over {len(points)} points in {len(chains)} chains, {spec.workers} worker(s)")
    config = config.with_overrides({"seed": spec.seed})

    if spec.workers == 1:
        results = [evaluate_chain(config, chain, use_chains) for chain in chains]
    else:
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            tasks = [loop.run_in_executor(pool, evaluate_chain, config, chain, use_chains) for chain in chains]
            results = await asyncio.gather(*tasks)

    rows = [row for chain_rows in results for row in chain_rows]
    frame = pd.DataFrame(rows).sort_values("index").reset_index(drop=True)
    failed = int(frame["error"].notna().sum()) if "error" in frame else 0
    if failed:
        logger.warning(f"{failed} of {len(frame)} sweep points failed")
    return frame


def sweep(config: RunConfig, spec: Optional[SweepSpec] = None) -> pd.DataFrame:
    return asyncio.run(run_sweep(config, spec or SweepSpec.from_config(config)))
