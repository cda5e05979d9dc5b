import numpy as np
import pytest

from apps.baselines.omp import block_omp_css
from apps.oracle.oracle import ObservationMask
from utils.exceptions import DegenerateInputError, ParameterError


def test_diagonal_order(full_mask):
    matrix = np.diag([2.0, 1.0])
    selection = block_omp_css(matrix, full_mask(matrix), 2)

    assert selection.indices.tolist() == [0, 1]
    assert np.allclose(selection.trace, [np.sqrt(5.0), 1.0, 0.0])
    assert selection.flags == frozenset()


def test_dominant_column_first(full_mask):
    matrix = np.random.default_rng(2).standard_normal((10, 6))
    matrix[:, 4] *= 10.0
    selection = block_omp_css(matrix, full_mask(matrix), 3)

    assert selection.indices[0] == 4
    assert len(selection.distinct) == 3


def test_residual_trace_nonincreasing(half_observed):
    masked, mask = half_observed
    selection = block_omp_css(masked, mask, 6)

    assert len(selection.trace) == 7
    assert np.all(np.diff(selection.trace) <= 1e-12)
    assert np.array_equal(selection.columns, masked[:, selection.indices])


def test_vanishing_correlation_flags_early_stop(full_mask):
    matrix = np.zeros((2, 3))
    matrix[:, :2] = np.diag([2.0, 1.0])
    selection = block_omp_css(matrix, full_mask(matrix), 3)

    assert "early_stop" in selection.flags
    assert selection.indices.tolist() == [0, 1, 2]


@pytest.mark.parametrize("s", [0, 3])
def test_s_out_of_range(full_mask, s):
    matrix = np.eye(2)
    with pytest.raises(ParameterError):
        block_omp_css(matrix, full_mask(matrix), s)


def test_all_zero_observations():
    with pytest.raises(DegenerateInputError):
        block_omp_css(np.zeros((3, 3)), ObservationMask(np.ones((3, 3))), 1)


def test_mask_shape_mismatch():
    with pytest.raises(ParameterError):
        block_omp_css(np.eye(3), ObservationMask(np.ones((3, 2))), 1)
