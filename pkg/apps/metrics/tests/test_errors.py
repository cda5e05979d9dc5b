import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apps.dense_core.linalg import best_rank_error
from apps.metrics.errors import (
    ErrorReport,
    error_report,
    reconstruction_error,
    selection_error,
)
from apps.samplers.structures import ColumnSelection, Reconstruction
from utils.exceptions import ParameterError


def random_instance(seed):
    rng = np.random.default_rng(seed)
    n1, n2 = rng.integers(2, 9, size=2)
    matrix = rng.standard_normal((n1, n2))
    size = int(rng.integers(1, n2 + 1))
    return matrix, rng.choice(n2, size=size, replace=False)


class TestErrorReport:
    def test_ratio(self):
        assert ErrorReport(2.0, 1.0, 3.0).relative_ratio == 2.0

    def test_ratio_exact_fit(self):
        assert ErrorReport(0.0, 0.0, 1.0).relative_ratio == 1.0

    def test_ratio_against_zero_oracle(self):
        assert ErrorReport(0.5, 0.0, 1.0).relative_ratio == math.inf

    def test_relative_selection_error(self):
        assert ErrorReport(1.0, 0.5, 4.0).relative_selection_error == 0.25
        assert ErrorReport(0.0, 0.0, 0.0).relative_selection_error == 0.0

    def test_as_dict(self):
        report = ErrorReport(1.0, 0.5, 2.0, reconstruction_error=1.5)

        assert report.as_dict() == {
            "selection_error": 1.0,
            "reconstruction_error": 1.5,
            "oracle_error": 0.5,
            "relative_ratio": 2.0,
            "relative_selection_error": 0.5,
        }


class TestSelectionError:
    def test_first_diagonal_column(self, diag_21):
        assert selection_error(diag_21, [0]) == pytest.approx(1.0)
        assert selection_error(diag_21, [1]) == pytest.approx(2.0)

    def test_every_column(self, wide_5x6):
        assert selection_error(wide_5x6, range(6)) <= 1e-10

    def test_accepts_column_selection(self, diag_21):
        selection = ColumnSelection([1, 1], diag_21[:, [1, 1]])

        assert selection_error(diag_21, selection) == pytest.approx(2.0)

    def test_empty_selection(self, diag_21):
        with pytest.raises(ParameterError):
            selection_error(diag_21, [])

    @pytest.mark.parametrize("indices", [[2], [-1]])
    def test_out_of_range(self, diag_21, indices):
        with pytest.raises(ParameterError):
            selection_error(diag_21, indices)

    @settings(deadline=None, max_examples=50)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_never_beats_best_rank(self, seed):
        matrix, indices = random_instance(seed)

        bound = best_rank_error(matrix, indices.size)
        assert selection_error(matrix, indices) >= bound - 1e-8

    @pytest.mark.slow
    def test_invariants_on_random_instances(self):
        for seed in range(500):
            matrix, indices = random_instance(seed)
            columns = matrix[:, indices]
            error = selection_error(matrix, indices)

            assert error >= best_rank_error(matrix, indices.size) - 1e-8
            fitted = reconstruction_error(
                matrix, columns, np.linalg.pinv(columns) @ matrix
            )
            assert fitted == pytest.approx(error, abs=1e-8)


class TestReconstructionError:
    def test_value(self, diag_21):
        columns = diag_21[:, [0]]

        assert reconstruction_error(diag_21, columns, [[1.0, 0.0]]) == 1.0

    def test_shape_mismatch(self, diag_21):
        with pytest.raises(ParameterError):
            reconstruction_error(diag_21, diag_21[:, [0]], np.zeros((2, 2)))


class TestErrorReportBuilder:
    def test_diagonal(self, diag_21):
        report = error_report(diag_21, [0], 1)

        assert report.selection_error == pytest.approx(1.0)
        assert report.oracle_error == pytest.approx(1.0)
        assert report.frobenius_norm == pytest.approx(math.sqrt(5.0))
        assert report.relative_ratio == pytest.approx(1.0)
        assert report.reconstruction_error is None

    def test_with_reconstruction(self, diag_21):
        columns = diag_21[:, [0]]
        reconstruction = Reconstruction.from_columns(columns, np.array([[1.0, 0.0]]))
        report = error_report(diag_21, [0], 1, reconstruction)

        assert report.reconstruction_error == pytest.approx(1.0)
