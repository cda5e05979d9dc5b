import numpy as np
import pytest


@pytest.fixture
def diag_21():
    return np.diag([2.0, 1.0])


@pytest.fixture
def wide_5x6():
    return np.random.default_rng(56).standard_normal((5, 6))
