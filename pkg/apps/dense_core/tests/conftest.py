import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


@pytest.fixture
def gaussian_8x4(rng):
    return rng.standard_normal((8, 4))


@pytest.fixture
def square_6x6(rng):
    return rng.standard_normal((6, 6))
