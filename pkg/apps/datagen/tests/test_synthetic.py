import numpy as np
import pytest

from apps.datagen.synthetic import (
    SyntheticSpec,
    gen_coherent,
    gen_lowrank_noise,
    normalize_frobenius,
    split_lowrank_noise,
)
from utils.exceptions import DegenerateInputError, ParameterError


class TestSyntheticSpec:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n1": 0, "n2": 5},
            {"n1": 5, "n2": 5, "k": 6},
            {"n1": 5, "n2": 5, "sigma": -0.1},
            {"n1": 5, "n2": 5, "repeated": 5},
            {"n1": 5, "n2": 5, "scale": 0.0},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ParameterError):
            SyntheticSpec(**kwargs)


class TestLowRankNoise:
    def test_same_seed_same_matrix(self):
        spec = SyntheticSpec(n1=20, n2=20, k=3, sigma=0.1, seed=42)

        assert np.array_equal(gen_lowrank_noise(spec), gen_lowrank_noise(spec))

    def test_seed_changes_matrix(self):
        first = gen_lowrank_noise(SyntheticSpec(n1=20, n2=20, seed=1))
        second = gen_lowrank_noise(SyntheticSpec(n1=20, n2=20, seed=2))

        assert not np.allclose(first, second)

    def test_exact_rank_is_symmetric_and_normalized(self):
        matrix = gen_lowrank_noise(SyntheticSpec(n1=50, n2=50, k=5, seed=3))

        assert np.linalg.norm(matrix) == pytest.approx(1.0)
        assert np.linalg.matrix_rank(matrix) == 5
        assert np.allclose(matrix, matrix.T)

    def test_rectangular(self):
        matrix = gen_lowrank_noise(SyntheticSpec(n1=30, n2=40, k=4, seed=5))

        assert matrix.shape == (30, 40)
        assert np.linalg.matrix_rank(matrix) == 4

    def test_zero_rank_is_full_rank(self):
        matrix = gen_lowrank_noise(SyntheticSpec(n1=10, n2=12, k=0, seed=6))

        assert np.linalg.matrix_rank(matrix) == 10

    def test_parts_share_the_scale(self):
        spec = SyntheticSpec(n1=50, n2=50, k=5, sigma=0.1, seed=7)
        matrix, signal, noise = split_lowrank_noise(spec)

        assert np.allclose(matrix, signal + noise)
        assert np.linalg.norm(matrix) == pytest.approx(1.0)
        ratio = np.linalg.norm(noise) / np.linalg.norm(signal)
        assert ratio == pytest.approx(0.1, rel=0.1)


class TestCoherent:
    def test_repeated_positions_hold_the_scaled_source(self):
        spec = SyntheticSpec(n1=30, n2=30, k=5, sigma=0.1, repeated=5, seed=8)
        matrix = gen_coherent(spec)
        norms = np.linalg.norm(matrix, axis=0)
        strongest = matrix[:, np.argmax(norms)]
        copies = [
            j for j in range(30) if np.allclose(matrix[:, j], strongest, atol=1e-14)
        ]

        assert len(copies) == 5
        assert np.linalg.norm(matrix) == pytest.approx(1.0)

    def test_deterministic(self):
        spec = SyntheticSpec(n1=20, n2=20, repeated=3, seed=9)

        assert np.array_equal(gen_coherent(spec), gen_coherent(spec))

    def test_needs_repeated_columns(self):
        with pytest.raises(ParameterError):
            gen_coherent(SyntheticSpec(n1=10, n2=10, repeated=0))


def test_normalize_zero_matrix():
    with pytest.raises(DegenerateInputError):
        normalize_frobenius(np.zeros((2, 2)))
