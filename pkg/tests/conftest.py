import numpy as np
import pytest

from source.core.grid import Axis


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def real_points(rng):
    return 2.0 * rng.standard_normal((200, 2))


@pytest.fixture
def half_points(rng):
    return rng.exponential(2.0, (200, 2)) + 1e-2


@pytest.fixture
def torus_axis():
    return Axis(-np.pi, np.pi, 64, periodic=True)
