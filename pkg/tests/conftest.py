import numpy as np
import pytest

from mpfc_sav.grid import BoundaryKind, GridSpec
from mpfc_sav.model import ModelParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(params=["neumann", "periodic"])
def bc(request):
    return BoundaryKind(request.param)


@pytest.fixture
def unit_grid(bc):
    return GridSpec(8, 8, 1.0, 1.0, bc)


@pytest.fixture
def accuracy_params():
    return ModelParams(epsilon=0.25, beta=0.9, m=0.001)


@pytest.fixture
def energy_params():
    return ModelParams(epsilon=0.025, beta=0.1, m=1.0)
