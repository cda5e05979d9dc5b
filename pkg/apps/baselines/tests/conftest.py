import numpy as np
import pytest

from apps.oracle.oracle import ObservationMask


@pytest.fixture
def full_mask():
    def _mask(matrix):
        return ObservationMask(np.ones(np.shape(matrix), dtype=bool))

    return _mask


@pytest.fixture
def tall_gaussian():
    return np.random.default_rng(12).standard_normal((30, 4))


@pytest.fixture
def half_observed():
    rng = np.random.default_rng(31)
    matrix = rng.standard_normal((40, 6))
    mask = ObservationMask(rng.random(matrix.shape) < 0.5)
    return np.where(mask.observed, matrix, 0.0), mask
