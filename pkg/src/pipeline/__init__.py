"""LangGraph workflow behind the command-line runs"""
from .graph import create_run_graph, run_pipeline
from .state import RunState

__all__ = ["create_run_graph", "run_pipeline", "RunState"]
