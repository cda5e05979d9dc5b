import logging
from dataclasses import dataclass

import numpy as np

from utils.exceptions import DegenerateInputError, ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyntheticSpec:
    """
    Recipe of a seeded synthetic test matrix.

    Attributes:
        n1 (int): Number of rows.
        n2 (int): Number of columns.
        k (int): Intrinsic rank of the signal, 0 for a full-rank Gaussian.
        sigma (float): Noise-to-signal ratio ‖R‖_F/‖A‖_F in expectation.
        repeated (int): Number of positions overwritten by the coherent column.
        scale (float): Amplification of the coherent column.
        seed (int | None): Seed of the generator.
    """

    n1: int
    n2: int
    k: int = 5
    sigma: float = 0.0
    repeated: int = 0
    scale: float = 10.0
    seed: int = None

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ParameterError(f"shape must be positive, got {self.n1}x{self.n2}")
        if not 0 <= self.k <= min(self.n1, self.n2):
            raise ParameterError(
                f"k must lie in [0, {min(self.n1, self.n2)}], got {self.k}"
            )
        if self.sigma < 0:
            raise ParameterError(f"sigma must be non-negative, got {self.sigma}")
        if not 0 <= self.repeated < self.n2:
            raise ParameterError(
                f"repeated must lie in [0, {self.n2}), got {self.repeated}"
            )
        if self.scale <= 0:
            raise ParameterError(f"scale must be positive, got {self.scale}")


def normalize_frobenius(matrix):
    """Scale M so that ‖M‖_F = 1."""
    matrix = np.asarray(matrix, dtype=np.float64)
    norm = float(np.linalg.norm(matrix))
    if norm == 0.0:
        raise DegenerateInputError("cannot normalize the zero matrix")
    return matrix / norm


def _signal(spec, rng):
    if spec.k == 0:
        return rng.standard_normal((spec.n1, spec.n2))
    left = rng.standard_normal((spec.n1, spec.k))
    if spec.n1 == spec.n2:
        return left @ left.T
    return left @ rng.standard_normal((spec.n2, spec.k)).T


def _noise(spec, signal, rng):
    if spec.sigma == 0:
        return np.zeros_like(signal)
    std = spec.sigma * np.linalg.norm(signal) / np.sqrt(signal.size)
    return std * rng.standard_normal(signal.shape)


def split_lowrank_noise(spec):
    """
    Low-rank plus noise matrix together with its two parts.

    The signal is A = BBᵀ for square shapes (A = BCᵀ otherwise) with Gaussian
    factors of width k; the noise R has i.i.d. N(0, σ²‖A‖_F²/(n1·n2)) entries.
    All three returned matrices share the scale that makes ‖A + R‖_F = 1.

    Returns:
        tuple: (M, A, R) with M = A + R.
    """

    rng = np.random.default_rng(spec.seed)
    signal = _signal(spec, rng)
    noise = _noise(spec, signal, rng)
    scale = float(np.linalg.norm(signal + noise))
    if scale == 0.0:
        raise DegenerateInputError("generated matrix is zero")
    signal, noise = signal / scale, noise / scale
    return signal + noise, signal, noise


def gen_lowrank_noise(spec):
    """Frobenius-normalized A + R, see ``split_lowrank_noise``."""
    matrix, _, _ = split_lowrank_noise(spec)
    logger.debug(
        f"Generated {spec.n1}x{spec.n2} rank-{spec.k} matrix, sigma={spec.sigma}"
    )
    return matrix


def gen_coherent(spec):
    """
    Low-rank plus noise matrix with one amplified column repeated.

    The base A + R is drawn as in ``split_lowrank_noise`` (before
    normalization). A uniformly chosen source column is multiplied by
    ``spec.scale`` and written over ``spec.repeated`` distinct uniformly
    chosen positions, keeping n2 fixed; the result is then normalized.

    Raises:
        ParameterError: If ``spec.repeated`` is zero.
    """

    if spec.repeated < 1:
        raise ParameterError("a coherent design needs at least one repeated column")

    rng = np.random.default_rng(spec.seed)
    signal = _signal(spec, rng)
    matrix = signal + _noise(spec, signal, rng)

    source = int(rng.integers(spec.n2))
    positions = rng.choice(spec.n2, size=spec.repeated, replace=False)
    matrix[:, positions] = spec.scale * matrix[:, [source]]
    logger.debug(
        f"Column {source} scaled by {spec.scale} "
        f"into positions {sorted(positions.tolist())}"
    )
    return normalize_frobenius(matrix)
