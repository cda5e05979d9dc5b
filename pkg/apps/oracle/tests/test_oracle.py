import numpy as np
import pytest

from apps.dense_core.structures import IndexSet
from apps.oracle.oracle import MatrixOracle, ObservationMask
from utils.exceptions import ParameterError


class TestEntryQueries:
    def test_entry_value_and_charge(self, diag_oracle):
        assert diag_oracle.observe_entry(0, 0) == 1.0
        assert diag_oracle.entry_queries == 1

    def test_requery_is_charged_again(self, diag_oracle):
        first = diag_oracle.observe_entry(1, 1)
        second = diag_oracle.observe_entry(1, 1)

        assert first == second == 2.0
        assert diag_oracle.entry_queries == 2
        assert diag_oracle.distinct_entries == 1

    def test_counter_after_distinct_queries(self, wide_oracle):
        for i, j in [(0, 0), (1, 2), (4, 3), (2, 1)]:
            wide_oracle.observe_entry(i, j)

        assert wide_oracle.entry_queries == 4
        assert wide_oracle.total_entries_observed == 4

    @pytest.mark.parametrize("i, j", [(-1, 0), (2, 0), (0, 2)])
    def test_out_of_range(self, diag_oracle, i, j):
        with pytest.raises(ParameterError):
            diag_oracle.observe_entry(i, j)

    def test_column_entries_charged_per_position(self, wide_oracle):
        values = wide_oracle.observe_column_entries(2, IndexSet(5, [0, 3]))

        assert np.allclose(values, wide_oracle.hidden[[0, 3], 2])
        assert wide_oracle.entry_queries == 2


class TestColumnAndRowQueries:
    def test_column(self, diag_oracle):
        assert np.allclose(diag_oracle.observe_column(1), [0.0, 2.0])
        assert diag_oracle.column_queries == 1

    def test_row(self, diag_oracle):
        assert np.allclose(diag_oracle.observe_row(0), [1.0, 0.0])
        assert diag_oracle.row_queries == 1

    def test_totals(self, wide_oracle):
        wide_oracle.observe_column(0)
        wide_oracle.observe_row(1)
        wide_oracle.observe_entry(0, 0)

        assert wide_oracle.total_entries_observed == 5 + 4 + 1

    def test_out_of_range(self, diag_oracle):
        with pytest.raises(ParameterError):
            diag_oracle.observe_column(2)
        with pytest.raises(ParameterError):
            diag_oracle.observe_row(-1)

    def test_returned_column_is_a_copy(self, diag_oracle):
        column = diag_oracle.observe_column(0)
        column[0] = 99.0

        assert diag_oracle.hidden[0, 0] == 1.0


class TestIndexSets:
    def test_probability_one(self, diag_oracle):
        assert list(diag_oracle.bernoulli_index_set(10, 1.0)) == list(range(10))

    def test_probability_zero(self, diag_oracle):
        assert len(diag_oracle.bernoulli_index_set(10, 0.0)) == 0

    def test_size_concentrates(self, diag_oracle):
        size = len(diag_oracle.bernoulli_index_set(1000, 0.3))

        assert abs(size - 300) <= 3 * np.sqrt(1000 * 0.3 * 0.7)

    @pytest.mark.parametrize("p", [-0.1, 1.5])
    def test_invalid_probability(self, diag_oracle, p):
        with pytest.raises(ParameterError):
            diag_oracle.bernoulli_index_set(10, p)

    def test_fixed_size(self, diag_oracle):
        omega = diag_oracle.index_set(20, 7, mode="fixed")

        assert len(omega) == 7

    def test_expected_count_clipped(self, diag_oracle):
        assert len(diag_oracle.index_set(5, 50)) == 5

    def test_unknown_mode(self, diag_oracle):
        with pytest.raises(ParameterError):
            diag_oracle.index_set(5, 2, mode="stratified")

    def test_deterministic_given_seed(self):
        first = MatrixOracle(np.eye(3), seed=5)
        second = MatrixOracle(np.eye(3), seed=5)

        for _ in range(3):
            assert np.array_equal(
                first.bernoulli_index_set(50, 0.4).indices,
                second.bernoulli_index_set(50, 0.4).indices,
            )


class TestMaskedView:
    def test_all_true(self, wide_oracle):
        view = wide_oracle.masked_view(ObservationMask(np.ones((5, 4), dtype=bool)))

        assert np.array_equal(view, wide_oracle.hidden)
        assert wide_oracle.entry_queries == 20

    def test_all_false(self, wide_oracle):
        view = wide_oracle.masked_view(ObservationMask(np.zeros((5, 4), dtype=bool)))

        assert not view.any()
        assert wide_oracle.entry_queries == 0

    def test_diagonal_mask(self, diag_oracle):
        view = diag_oracle.masked_view(ObservationMask(np.eye(2, dtype=bool)))

        assert np.array_equal(view, np.diag([1.0, 2.0]))
        assert diag_oracle.entry_queries == 2

    def test_shape_mismatch(self, diag_oracle):
        with pytest.raises(ParameterError):
            diag_oracle.masked_view(ObservationMask(np.ones((3, 2), dtype=bool)))

    def test_bernoulli_mask_rate(self, wide_oracle):
        mask = wide_oracle.bernoulli_mask(1.0)

        assert mask.count == 20
