from typing import Callable, Dict, Optional

import numpy as np
from loguru import logger

from ..errors import BracketError, ModelError
from ..lattice import LatticeGraph, coulomb_matrix
from ..model import ModelParams, PinningPattern
from .solver import solve
from .state import SolverConfig

MAX_WIDENINGS = 8
MAX_BISECTIONS = 60


def _initial_half_width(graph: LatticeGraph, p: ModelParams) -> float:
    z = int(graph.degrees().max())
    width = 2.0 * z * p.t + abs(p.g_mev) * p.S + abs(p.h_z) + abs(p.h_x)
    if p.V0 > 0:
        width += coulomb_matrix(graph, p.V0, p.screening).V.sum(axis=1).max()
    return width


def _bisect(
    occupation: Callable[[float], float], lo: float, hi: float, threshold: float, resolution: float
) -> float:
    """Smallest μ (to resolution) with occupation(μ) > threshold, given it holds at hi"""
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= resolution:
            break
        mid = 0.5 * (lo + hi)
        if occupation(mid) > threshold:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def tune_chemical_potential(
    graph: LatticeGraph,
    p: ModelParams,
    cfg: SolverConfig,
    target_n: float,
    pinning: Optional[PinningPattern] = None,
) -> float:
    """Chemical potential at which Tr ρ(μ) reaches ``target_n`` within 1/2.

    Returns the midpoint of the μ interval where Tr ρ stays within 1/2 of the
    target, so a target on a charge plateau lands in the plateau centre.
    """
    N = graph.n_sites
    if not 0 < target_n < N:
        raise ModelError(f"target filling {target_n} outside (0, {N})")
    if cfg.n_electrons is not None:
        raise ModelError("chemical-potential tuning needs a grand-canonical solver")

    cache: Dict[float, float] = {}

    def occupation(mu: float) -> float:
        if mu not in cache:
            cache[mu] = solve(graph, p.model_copy(update={"mu": mu}), cfg, pinning).total_n
        return cache[mu]

    half = _initial_half_width(graph, p)
    lo, hi = -half, half
    for _ in range(MAX_WIDENINGS):
        if occupation(lo) < target_n and occupation(hi) > target_n:
            break
        lo, hi = lo - half, hi + half
        half *= 2
    else:
        raise BracketError(f"could not bracket <n> = {target_n} within μ ∈ [{lo:.4g}, {hi:.4g}]", sorted(cache.items()))

    resolution = 1e-6 * p.t
    lower = _bisect(occupation, lo, hi, target_n - 0.5, resolution) if occupation(lo) <= target_n - 0.5 else lo
    upper = _bisect(occupation, lo, hi, target_n + 0.5, resolution) if occupation(hi) > target_n + 0.5 else hi
    mu = 0.5 * (lower + upper)
    if abs(occupation(mu) - target_n) >= 0.5:
        mu = _bisect(occupation, lo, hi, target_n, resolution)

    ordered = sorted(cache.items())
    if any(b[1] < a[1] - 1e-6 for a, b in zip(ordered, ordered[1:])):
        logger.warning("Tr ρ(μ) is not monotone on the sampled points")
    logger.info(f"Tuned μ = {mu:.6g} meV for <n> = {target_n} ({len(cache)} solves)")
    return float(mu)


def occupation_curve(
    graph: LatticeGraph, p: ModelParams, cfg: SolverConfig, mu_grid: np.ndarray
) -> np.ndarray:
    return np.array([solve(graph, p.model_copy(update={"mu": float(mu)}), cfg).total_n for mu in mu_grid])
