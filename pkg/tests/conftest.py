import numpy as np
import pytest

from sqglab.fields import SpectralField
from sqglab.grid import Grid2D


@pytest.fixture(scope="session")
def grid64():
    return Grid2D(64)


@pytest.fixture(scope="session")
def grid128():
    return Grid2D(128)


@pytest.fixture(scope="session")
def grid256():
    return Grid2D(256)


def random_real_field(grid, seed=0, components=1):
    rng = np.random.default_rng(seed)
    n = grid.n_side
    shape = (n, n) if components == 1 else (2, n, n)
    return SpectralField.from_values(grid, rng.standard_normal(shape))
