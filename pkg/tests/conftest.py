import numpy as np
import pytest

from src.lattice import Boundary, Geometry, build_lattice
from src.meanfield import SolverConfig
from src.model import ModelParams


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def chain4_open():
    return build_lattice(Geometry.CHAIN, 4, boundary=Boundary.OPEN)


@pytest.fixture
def chain2_open():
    return build_lattice(Geometry.CHAIN, 2, boundary=Boundary.OPEN)


@pytest.fixture
def square2_open():
    return build_lattice(Geometry.SQUARE, 2, 2, boundary=Boundary.OPEN)


@pytest.fixture
def free_params():
    """Hopping only: no Coulomb, no hyperfine, no fields"""
    return ModelParams(t=1.0, g=0.0, V0=0.0)


@pytest.fixture
def fast_solver():
    return SolverConfig(tolerance=1e-10, max_iterations=4000, restarts=2, seed=7)
