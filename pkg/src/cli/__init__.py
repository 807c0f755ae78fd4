"""Command-line front end, sweep runner and output writers"""
from .app import build_parser, main, run
from .commands import COMMANDS, CommandResult, Subcommand
from .outputs import long_format, write_manifest, write_table
from .sweep import SweepSpec, evaluate_chain, grid_points, run_sweep, sweep, warm_start_chains

__all__ = [
    "build_parser",
    "main",
    "run",
    "COMMANDS",
    "CommandResult",
    "Subcommand",
    "long_format",
    "write_manifest",
    "write_table",
    "SweepSpec",
    "evaluate_chain",
    "grid_points",
    "run_sweep",
    "sweep",
    "warm_start_chains",
]
