import numpy as np
import pytest

from nls2d import FourierGrid, build_line


@pytest.fixture(scope="session")
def small_line():
    return build_line(1.0, 24, 23)


@pytest.fixture(scope="session")
def small_ygrid():
    return FourierGrid(8, 2.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240814)
