import time
from typing import Any, Dict

from loguru import logger
from pydantic import ValidationError

from ..config import load_config
from ..errors import SimulationError
from .state import RunState

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_CONVERGED = 2


def _failure(message: str) -> Dict[str, Any]:
    logger.error(message)
    return {"error": message, "exit_code": EXIT_CONFIG}


async def load_config_node(state: RunState) -> Dict[str, Any]:
    """Read and validate the config file; --seed overrides the file's SEED"""
    try:
        config = load_config(state.get("config_path"))
        if state.get("seed") is not None:
            config = config.with_overrides({"seed": state["seed"]})
        config.model_params()
    except (SimulationError, ValidationError) as e:
        return _failure(f"Config error: {e}")
    logger.info(f"Loaded config {state.get('config_path') or '(defaults)'} for '{state['subcommand']}'")
    return {"config": config}


async def build_lattice_node(state: RunState) -> Dict[str, Any]:
    try:
        graph = state["config"].build_graph()
    except SimulationError as e:
        return _failure(f"Config error: [geometry] {e}")
    logger.info(f"Built {graph.geometry.value} lattice with {graph.n_sites} sites")
    return {"graph": graph}


async def run_command_node(state: RunState) -> Dict[str, Any]:
    from ..cli.commands import COMMANDS, Subcommand

    handler = COMMANDS[Subcommand(state["subcommand"])]
    try:
        result = await handler(state["config"], state["graph"], state["out_dir"], state.get("workers", 1))
    except (SimulationError, ValidationError) as e:
        return _failure(f"Run failed ({state['subcommand']}): {e}")
    exit_code = EXIT_OK
    if not result.converged:
        if state.get("strict"):
            logger.error("Solver did not converge on every point (strict mode)")
            exit_code = EXIT_NOT_CONVERGED
        else:
            logger.warning("Solver did not converge on every point; rows are flagged")
    return {"result": result, "message": result.message, "exit_code": exit_code}


async def write_outputs_node(state: RunState) -> Dict[str, Any]:
    from ..cli.outputs import write_table

    out_dir = state["out_dir"]
    result = state["result"]
    outputs = list(result.files)
    for name, (frame, sidecar) in result.tables.items():
        outputs.extend(write_table(frame, out_dir / f"{name}.csv", sidecar))
    return {"outputs": outputs}


async def write_manifest_node(state: RunState) -> Dict[str, Any]:
    from ..cli.outputs import write_manifest

    config = state["config"]
    path = write_manifest(
        state["out_dir"],
        state["subcommand"],
        config.resolved(),
        state.get("outputs", []),
        config.seed,
        state.get("workers", 1),
        time.perf_counter() - state["started"],
        state.get("exit_code", EXIT_OK),
    )
    return {"outputs": [*state.get("outputs", []), path]}
