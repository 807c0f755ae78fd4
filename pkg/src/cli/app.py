import argparse
import asyncio
import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger

from .commands import Subcommand


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dopant-lattice",
        description="Nuclear-spin dopant-lattice simulations: phase diagrams, confinement, transport and bands",
    )
    parser.add_argument("subcommand", choices=[s.value for s in Subcommand])
    parser.add_argument("--config", default=None, help="KEY=value config file (defaults when omitted)")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--workers", type=int, default=1, help="parallel sweep workers")
    parser.add_argument("--seed", type=int, default=None, help="overrides SEED from the config")
    parser.add_argument("--strict", action="store_true", help="exit 2 when any solver run did not converge")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return parser


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level)


def run(
    config_path: Optional[str],
    subcommand: str,
    out_dir: str = "out",
    workers: int = 1,
    seed: Optional[int] = None,
    strict: bool = False,
) -> int:
    """Execute one subcommand; returns 0 on success, 1 on config error, 2 on strict non-convergence"""
    from ..pipeline import run_pipeline

    if workers < 1:
        logger.error("Config error: [workers] must be >= 1")
        return 1
    final = asyncio.run(run_pipeline(subcommand, config_path, Path(out_dir), workers, seed, strict))
    if final.get("message"):
        print(final["message"])
    return int(final.get("exit_code", 0))


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    return run(args.config, args.subcommand, args.out, args.workers, args.seed, args.strict)
