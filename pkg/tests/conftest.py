import numpy as np
import pytest

from pacdyn import grid, model


@pytest.fixture(scope="session")
def grid8():
    return grid.build_grid(8)


@pytest.fixture(scope="session")
def grid16():
    return grid.build_grid(16)


@pytest.fixture
def params8(grid8):
    return model.ModelParams(kappa=2 * grid8.h)


@pytest.fixture
def dw():
    return model.SurfacePotentialSpec.double_well()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
