from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.optimize import OptimizeWarning, curve_fit
from scipy.stats import spearmanr

from ..errors import FitError, ObservableError

MIN_POINTS = 8


def oscillatory_model(d: np.ndarray, rho0: float, A: float, B: float, delta: float, phi: float = 0.0) -> np.ndarray:
    """ρ0 + A cos(B d + φ) / d^(1+δ)"""
    return rho0 + A * np.cos(B * d + phi) / d ** (1.0 + delta)


def exponential_model(d: np.ndarray, rho0: float, A: float, gamma: float) -> np.ndarray:
    return rho0 + A * np.exp(-gamma * d)


@dataclass
class FamilyFit:
    params: Dict[str, float]
    mse: float
    starts: int
    failures: int


@dataclass
class CdwFit:
    oscillatory: FamilyFit
    exponential: FamilyFit

    @property
    def preferred(self) -> str:
        return "oscillatory" if self.oscillatory.mse <= self.exponential.mse else "exponential"

    def to_row(self) -> Dict[str, float]:
        row = {f"osc_{k}": v for k, v in self.oscillatory.params.items()}
        row.update({f"exp_{k}": v for k, v in self.exponential.params.items()})
        row.update({"osc_mse": self.oscillatory.mse, "exp_mse": self.exponential.mse, "preferred": self.preferred})
        return row


def _multi_start(
    model: Callable,
    names: Sequence[str],
    d: np.ndarray,
    y: np.ndarray,
    starts: List[Tuple[float, ...]],
    bounds: Tuple[Sequence[float], Sequence[float]],
) -> FamilyFit:
    best: Optional[Tuple[float, np.ndarray]] = None
    failures = 0
    for p0 in starts:
        try:
            popt, _ = curve_fit(model, d, y, p0=p0, bounds=bounds, maxfev=20000)
        except (RuntimeError, ValueError, OptimizeWarning) as e:
            failures += 1
            logger.debug(f"fit start {p0} failed: {e}")
            continue
        mse = float(np.mean((model(d, *popt) - y) ** 2))
        if best is None or mse < best[0]:
            best = (mse, popt)
    if best is None:
        raise FitError(f"all {len(starts)} starts failed for {model.__name__}")
    return FamilyFit(params=dict(zip(names, map(float, best[1]))), mse=best[0], starts=len(starts), failures=failures)


def cdw_fit(d: np.ndarray, values: np.ndarray, fit_phase: bool = True) -> CdwFit:
    """Least-squares fits of the oscillatory power-law and exponential families.

    The oscillatory family carries an optional phase φ; with ``fit_phase=False``
    it is the plain ρ0 + A cos(B d) / d^(1+δ). Complex input is fitted on its
    real part.
    """
    d = np.asarray(d, dtype=float)
    y = np.real(np.asarray(values))
    mask = d >= 1
    d, y = d[mask], y[mask]
    if d.size < MIN_POINTS:
        raise ObservableError(f"cdw_fit needs >= {MIN_POINTS} points with d >= 1, got {d.size}")

    rho0 = float(np.mean(y[-max(2, d.size // 4):]))
    amp = float(max(np.max(np.abs(y - rho0)) * d[np.argmax(np.abs(y - rho0))], 1e-12))
    B_starts = np.linspace(0.1, np.pi, 16)
    if fit_phase:
        names = ("rho0", "A", "B", "delta", "phi")
        starts = [(rho0, amp, B, 0.0, phi) for B, phi in product(B_starts, (0.0, -np.pi / 2, np.pi / 2, np.pi))]
        bounds = ([-np.inf, 0.0, 0.0, -1.0, -np.pi], [np.inf, np.inf, np.pi, 10.0, np.pi])
        model = oscillatory_model
    else:
        names = ("rho0", "A", "B", "delta")
        starts = [(rho0, amp, B, 0.0) for B in B_starts]
        bounds = ([-np.inf, 0.0, 0.0, -1.0], [np.inf, np.inf, np.pi, 10.0])

        def model(x, rho0, A, B, delta):
            return oscillatory_model(x, rho0, A, B, delta)

        model.__name__ = "oscillatory_model"

    osc = _multi_start(model, names, d, y, starts, bounds)
    exp_starts = [(rho0, float(y[0] - rho0) * np.exp(g), g) for g in (0.05, 0.3, 1.0, 3.0)]
    exp = _multi_start(
        exponential_model, ("rho0", "A", "gamma"), d, y, exp_starts, ([-np.inf, -np.inf, 0.0], [np.inf, np.inf, 50.0])
    )
    return CdwFit(oscillatory=osc, exponential=exp)


def spearman_monotonicity(d: Sequence[float], V: Sequence[float], threshold: float = 0.9) -> Tuple[float, str]:
    """Rank correlation of V(d) and its verdict: confined, deconfined or inconclusive"""
    rho, _ = spearmanr(d, V)
    rho = float(rho) if np.isfinite(rho) else 0.0
    if rho >= threshold:
        return rho, "confined"
    if rho <= -threshold:
        return rho, "deconfined"
    return rho, "inconclusive"
