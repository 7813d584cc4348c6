import numpy as np
import pytest

from src.forms import ModelParams
from src.scenarios.example1 import example1_meshes
from src.system import Discretization
from tests.helpers import coupled_meshes


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


@pytest.fixture(scope='module')
def level0_meshes():
    return example1_meshes(0)


@pytest.fixture(scope='module')
def stokes_disc(level0_meshes):
    return Discretization(
        *level0_meshes, ModelParams(convection_on=False), dt=1e-3
    )


@pytest.fixture(scope='module')
def navier_disc(level0_meshes):
    return Discretization(*level0_meshes, ModelParams(), dt=1e-3)


@pytest.fixture(scope='module')
def tiny_disc():
    params = ModelParams(
        mu=0.8, rho_f=1.3, K=(1.0, 0.3, 0.3, 2.0), alpha_bjs=0.7
    )
    return Discretization(*coupled_meshes(1, 1), params, dt=0.1)
