import json
from pathlib import Path
from typing import Union

import numpy as np

from .state import MeanFieldState

_ARRAYS = ("rho", "K", "spins", "U", "V", "E_qp", "occupations")


def save_checkpoint(state: MeanFieldState, path: Union[str, Path]) -> Path:
    """Arrays to ``.npz``, scalars and the Ω trace to a JSON sidecar"""
    path = Path(path).with_suffix(".npz")
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(path, **{name: getattr(state, name) for name in _ARRAYS})
    meta = {
        "omega": state.omega,
        "energy": state.energy,
        "mu": state.mu,
        "beta": state.beta,
        "iterations": state.iterations,
        "converged": state.converged,
        "omega_trace": state.omega_trace,
        "flags": state.flags,
        "guess": state.guess,
    }
    path.with_suffix(".json").write_text(json.dumps(meta, indent=2))
    return path


def load_checkpoint(path: Union[str, Path]) -> MeanFieldState:
    path = Path(path).with_suffix(".npz")
    meta = json.loads(path.with_suffix(".json").read_text())
    with np.load(path) as data:
        arrays = {name: data[name] for name in _ARRAYS}
    return MeanFieldState(**arrays, **meta)
