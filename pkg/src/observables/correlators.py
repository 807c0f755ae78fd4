from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..errors import ObservableError
from ..lattice import Boundary, LatticeGraph


@dataclass(frozen=True)
class CorrelatorTable:
    """<c_{i0}† c_{i0+d}> for d = 0..d_max (indices row-major on 2D arrays)"""
    site: int
    d: np.ndarray
    values: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"d": self.d, "re": self.values.real, "im": self.values.imag})


def correlator_profile(rho: np.ndarray, graph: LatticeGraph, i0: int, d_max: int) -> CorrelatorTable:
    """Equal-time one-body correlator from ρ_ij = <c_j† c_i>.

    Works for a mean-field ρ or the ED one-body density matrix alike.
    """
    N = graph.n_sites
    if not 0 <= i0 < N or d_max < 0:
        raise ObservableError(f"site {i0} / d_max {d_max} out of range for N={N}")
    periodic = graph.boundary is Boundary.PERIODIC
    if periodic and d_max > N // 2:
        raise ObservableError(f"d_max {d_max} exceeds N/2 = {N // 2} under periodic boundary")
    if not periodic and d_max >= N - i0:
        raise ObservableError(f"d_max {d_max} runs past the open edge from site {i0}")
    d = np.arange(d_max + 1)
    targets = (i0 + d) % N
    values = np.asarray(rho)[targets, i0].astype(complex)
    return CorrelatorTable(site=i0, d=d, values=values)


def free_chain_correlator(n_sites: int, d: np.ndarray) -> np.ndarray:
    """Half-filled periodic free chain with N ≡ 2 (mod 4): sin(πd/2) / (N sin(πd/N))"""
    d = np.asarray(d, dtype=float)
    out = np.empty_like(d)
    zero = d == 0
    out[zero] = 0.5
    out[~zero] = np.sin(np.pi * d[~zero] / 2) / (n_sites * np.sin(np.pi * d[~zero] / n_sites))
    return out
