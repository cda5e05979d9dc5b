import numpy as np
import pytest

from apps.oracle.oracle import MatrixOracle


@pytest.fixture
def diag_oracle():
    return MatrixOracle(np.diag([1.0, 2.0]), seed=7)


@pytest.fixture
def wide_oracle():
    rng = np.random.default_rng(3)
    return MatrixOracle(rng.standard_normal((5, 4)), seed=11)
