import numpy as np
import pytest

from apps.datagen.synthetic import SyntheticSpec, gen_lowrank_noise
from apps.oracle.oracle import MatrixOracle


@pytest.fixture
def rng():
    return np.random.default_rng(515)


@pytest.fixture
def lowrank_50():
    return gen_lowrank_noise(SyntheticSpec(n1=50, n2=50, k=5, sigma=0.0, seed=3))


@pytest.fixture
def orthogonal_321():
    return np.diag([3.0, 2.0, 1.0])


@pytest.fixture
def single_column():
    matrix = np.zeros((6, 5))
    matrix[:, 2] = [1.0, -2.0, 0.5, 3.0, 0.0, 1.0]
    return matrix


@pytest.fixture
def make_oracle():
    def _make(matrix, seed=0):
        return MatrixOracle(matrix, seed=seed)

    return _make
