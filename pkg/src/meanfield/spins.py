from typing import Optional, Tuple

import numpy as np
from loguru import logger

from ..model import ModelParams

SMALL_ARGUMENT = 1e-4
ZERO_FIELD = 1e-300


def _coth(x: np.ndarray) -> np.ndarray:
    return 1.0 / np.tanh(x)


def brillouin_magnetization(x: np.ndarray, S: float) -> np.ndarray:
    """Thermal <I> of a spin S in a field, x = β|b|.

    m = (S + 1/2) coth((S + 1/2) x) - (1/2) coth(x / 2); m = tanh(x/2)/2 for S = 1/2.
    """
    x = np.asarray(x, dtype=float)
    m = np.empty_like(x)
    small = np.abs(x) < SMALL_ARGUMENT
    m[small] = S * (S + 1.0) * x[small] / 3.0
    xl = x[~small]
    m[~small] = (S + 0.5) * _coth((S + 0.5) * xl) - 0.5 * _coth(0.5 * xl)
    return m


def _log_sinh(y: np.ndarray) -> np.ndarray:
    return y + np.log1p(-np.exp(-2.0 * y)) - np.log(2.0)


def spin_log_partition(x: np.ndarray, S: float) -> np.ndarray:
    """ln Σ_m e^{x m} = ln[sinh((2S+1)x/2) / sinh(x/2)], x = β|b| >= 0"""
    x = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    small = x < SMALL_ARGUMENT
    out[small] = np.log(2 * S + 1) + S * (S + 1) * x[small] ** 2 / 6.0
    xl = x[~small]
    out[~small] = _log_sinh((S + 0.5) * xl) - _log_sinh(0.5 * xl)
    return out


def effective_fields(density: np.ndarray, p: ModelParams, epsilon: Optional[np.ndarray] = None) -> np.ndarray:
    """b_i = (h_x, 0, h_z + g ρ_ii + ε_i) acting on each nuclear spin"""
    N = len(density)
    eps = np.zeros(N) if epsilon is None else epsilon
    b = np.zeros((N, 3))
    b[:, 0] = p.h_x
    b[:, 2] = p.h_z + p.g_mev * density + eps
    return b


def spin_update(
    rho: np.ndarray,
    p: ModelParams,
    beta: Optional[float],
    epsilon: Optional[np.ndarray] = None,
    previous: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, int]:
    """Classical spins aligned with their effective field.

    Length S at T = 0, Brillouin-shortened at finite β. Sites with zero field
    keep the previous spin; the count of such sites is returned.
    """
    density = np.real(np.diag(rho)) if np.ndim(rho) == 2 else np.asarray(rho, dtype=float)
    b = effective_fields(density, p, epsilon)
    norm = np.linalg.norm(b, axis=1)
    zero = norm <= ZERO_FIELD
    if beta is None:
        length = np.full(len(norm), p.S)
    else:
        length = brillouin_magnetization(beta * norm, p.S)
    spins = np.zeros_like(b)
    spins[~zero] = (length[~zero] / norm[~zero])[:, None] * b[~zero]
    if zero.any():
        logger.warning(f"{zero.sum()} site(s) with vanishing spin field keep their previous spin")
        spins[zero] = previous[zero] if previous is not None else 0.0
    return spins, int(zero.sum())
