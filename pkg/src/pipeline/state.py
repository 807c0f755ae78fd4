from pathlib import Path
from typing import Any, Dict, List, Optional, TypedDict

from ..config import RunConfig
from ..lattice import LatticeGraph


class RunState(TypedDict, total=False):
    # Input
    config_path: Optional[str]
    subcommand: str
    out_dir: Path
    workers: int
    seed: Optional[int]
    strict: bool
    started: float

    # Processing state
    config: RunConfig
    graph: LatticeGraph
    result: Any

    # Output
    outputs: List[Path]
    message: Optional[str]
    error: Optional[str]
    exit_code: int
