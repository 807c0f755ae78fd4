import json
import platform
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from loguru import logger

from ..errors import ConfigError


def long_format(frame: pd.DataFrame, id_columns: Sequence[str], observables: Sequence[str]) -> pd.DataFrame:
    """One row per grid point per observable"""
    missing = [o for o in observables if o not in frame.columns]
    if missing and len(frame):
        raise ConfigError(f"unknown observables {missing}; available: {sorted(frame.columns)}", key="observables")
    present = [o for o in observables if o in frame.columns]
    ids = [c for c in id_columns if c in frame.columns]
    long = frame.melt(id_vars=ids, value_vars=present, var_name="observable", value_name="value")
    return long.sort_values(["index", "observable"] if "index" in ids else ["observable"]).reset_index(drop=True)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    if isinstance(value, Path):
        return str(value)
    return value


def write_json(data: Dict[str, Any], path: Path) -> Path:
    path.write_text(json.dumps(_jsonable(data), indent=2, sort_keys=True))
    return path


def write_table(frame: pd.DataFrame, path: Path, sidecar: Optional[Dict[str, Any]] = None) -> List[Path]:
    """CSV plus an optional JSON sidecar with the same stem"""
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.12g")
    written = [path]
    if sidecar is not None:
        written.append(write_json(sidecar, path.with_suffix(".json")))
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return written


def write_manifest(
    out_dir: Path,
    subcommand: str,
    resolved: Dict[str, Any],
    outputs: List[Path],
    seed: int,
    workers: int,
    wall_time: float,
    exit_code: int,
) -> Path:
    from .. import __version__

    manifest = {
        "subcommand": subcommand,
        "version": __version__,
        "python": platform.python_version(),
        "seed": seed,
        "workers": workers,
        "wall_time_s": round(wall_time, 3),
        "exit_code": exit_code,
        "outputs": sorted(str(p.relative_to(out_dir)) if p.is_relative_to(out_dir) else str(p) for p in outputs),
        "resolved": resolved,
    }
    return write_json(manifest, out_dir / "manifest.json")
