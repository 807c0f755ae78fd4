import time
from pathlib import Path
from typing import Optional

from langgraph.graph import END, StateGraph


def create_run_graph():
    """Create the run workflow: config -> lattice -> command -> outputs -> manifest"""
    from .state import RunState
    from .nodes import (
        build_lattice_node,
        load_config_node,
        run_command_node,
        write_manifest_node,
        write_outputs_node,
    )

    graph = StateGraph(RunState)

    graph.add_node("load_config", load_config_node)
    graph.add_node("build_lattice", build_lattice_node)
    graph.add_node("run_command", run_command_node)
    graph.add_node("write_outputs", write_outputs_node)
    graph.add_node("write_manifest", write_manifest_node)

    graph.set_entry_point("load_config")

    def stop_on_error(next_node: str):
        return lambda state: "end" if state.get("error") else next_node

    graph.add_conditional_edges("load_config", stop_on_error("build_lattice"), {"build_lattice": "build_lattice", "end": END})
    graph.add_conditional_edges("build_lattice", stop_on_error("run_command"), {"run_command": "run_command", "end": END})
    graph.add_conditional_edges("run_command", stop_on_error("write_outputs"), {"write_outputs": "write_outputs", "end": END})
    graph.add_edge("write_outputs", "write_manifest")
    graph.add_edge("write_manifest", END)

    return graph.compile()


async def run_pipeline(
    subcommand: str,
    config_path: Optional[str] = None,
    out_dir: Path = Path("out"),
    workers: int = 1,
    seed: Optional[int] = None,
    strict: bool = False,
):
    """Run one subcommand end to end and return the final state"""
    app = create_run_graph()
    initial_state = {
        "config_path": config_path,
        "subcommand": subcommand,
        "out_dir": Path(out_dir),
        "workers": workers,
        "seed": seed,
        "strict": strict,
        "started": time.perf_counter(),
        "outputs": [],
        "error": None,
        "exit_code": 0,
    }
    return await app.ainvoke(initial_state)
