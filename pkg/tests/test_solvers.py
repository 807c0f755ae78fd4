from pathlib import Path

import pytest

from src.config import load_config
from src.errors import ConfigError
from src.lattice import Geometry, build_lattice
from src.meanfield import SolverConfig
from src.model import ModelParams
from src.solvers import (
    EDBackend,
    FTHFBBackend,
    HartreeFockBackend,
    SolverKind,
    electrons_for_filling,
    get_solver_backend,
)

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def test_get_solver_backend():
    assert isinstance(get_solver_backend("hf"), HartreeFockBackend)
    assert isinstance(get_solver_backend(SolverKind.FTHFB), FTHFBBackend)
    assert isinstance(get_solver_backend("ED", cap=100), EDBackend)
    assert get_solver_backend("ed", cap=100).cap == 100
    with pytest.raises(ConfigError):
        get_solver_backend("dmrg")


def test_electrons_for_filling():
    assert electrons_for_filling(0.5, 42) == 21
    assert electrons_for_filling(0.5, 43) == 22
    assert electrons_for_filling(0.25, 16) == 4


def test_hartree_fock_holds_configured_filling(chain4_open):
    # a strong Hartree shift at μ = 0 would empty a grand-canonical lattice
    p = ModelParams(t=1.0, g=0.0, V0=10.0, filling=0.5)
    result = HartreeFockBackend().evaluate(chain4_open, p, SolverConfig(restarts=1))
    assert result.report.total_n == pytest.approx(2.0)
    assert result.params.beta is None


def test_hartree_fock_explicit_electron_number_wins(chain4_open):
    p = ModelParams(t=1.0, g=0.0, V0=10.0, filling=0.5)
    result = HartreeFockBackend().evaluate(chain4_open, p, SolverConfig(restarts=1, n_electrons=1))
    assert result.report.total_n == pytest.approx(1.0)


@pytest.mark.parametrize("name", ["chain_phase_diagram.env", "square_phase_diagram.env", "correlators.env"])
def test_hartree_fock_presets_run_at_half_filling(name):
    config = load_config(CONFIGS / name)
    assert config.solver is SolverKind.HF
    assert config.model_params().filling == 0.5


def test_hartree_fock_and_cold_fthfb_agree_on_square():
    graph = build_lattice(Geometry.SQUARE, 4, 4)
    p = ModelParams(t=1.0, g=2000.0, h_z=-1.0, h_x=0.01, V0=0.0, beta=1000.0, filling=0.5)
    cfg = SolverConfig(tolerance=1e-9, max_iterations=3000, restarts=2, seed=7)
    hf = HartreeFockBackend().evaluate(graph, p, cfg)
    fthfb = FTHFBBackend().evaluate(graph, p, cfg)
    assert fthfb.report.total_n == pytest.approx(8.0, abs=1e-2)
    assert abs(hf.report.n_z) > 0.9
    assert abs(fthfb.report.n_z) == pytest.approx(abs(hf.report.n_z), abs=1e-2)
