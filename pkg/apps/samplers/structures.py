import math
from dataclasses import dataclass, field

import numpy as np

from utils.exceptions import DegenerateInputError, ParameterError


@dataclass(frozen=True)
class SamplingWeights:
    """
    Unnormalized column scores defining a discrete sampling distribution.

    Attributes:
        scores (np.ndarray): Nonnegative score per column (ĉ_i).
        total (float): Sum of the scores (f̂).
    """

    scores: np.ndarray
    total: float

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64).ravel()
        if np.any(scores < 0) or not np.all(np.isfinite(scores)):
            raise ParameterError("sampling scores must be finite and nonnegative")
        total = float(self.total)
        if not math.isclose(total, float(scores.sum()), rel_tol=1e-12):
            raise ParameterError(
                f"sampling total {total} does not match the score sum {scores.sum()}"
            )
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "total", total)

    @classmethod
    def from_scores(cls, scores):
        scores = np.asarray(scores, dtype=np.float64).ravel()
        return cls(scores, float(scores.sum()))

    def __len__(self):
        return int(self.scores.size)

    def probabilities(self):
        self._require_mass(self.scores, self.total)
        return self.scores / self.total

    @staticmethod
    def _require_mass(scores, total):
        if not total > 0 or not scores.any():
            raise DegenerateInputError(
                "all sampling scores are zero, no distribution to draw from"
            )

    def draw(self, rng, count, replace=True):
        """
        Draw ``count`` column indices with Pr[j] proportional to scores[j].

        Draws invert the cumulative sum of the exact scores, so columns with a
        zero score are never returned. Without replacement each drawn column
        leaves the pool; when the remaining mass runs out the draw stops early.

        Args:
            rng (np.random.Generator): Random stream of the run.
            count (int): Number of draws.
            replace (bool): Sample with replacement.

        Returns:
            tuple: (indices, shortfall) where shortfall counts draws that could
            not be made without replacement.

        Raises:
            DegenerateInputError: If every score is zero.
        """

        self._require_mass(self.scores, self.total)
        if replace:
            return _invert_cumsum(self.scores, rng.random(count)), 0

        remaining = np.array(self.scores)
        chosen = []
        for _ in range(count):
            if not remaining.any():
                break
            index = int(_invert_cumsum(remaining, rng.random(1))[0])
            chosen.append(index)
            remaining[index] = 0.0
        return np.asarray(chosen, dtype=np.intp), count - len(chosen)


def _invert_cumsum(scores, uniforms):
    cumulative = np.cumsum(scores)
    positions = np.searchsorted(cumulative, uniforms * cumulative[-1], side="right")
    return np.minimum(positions, np.flatnonzero(scores)[-1]).astype(np.intp)


@dataclass(frozen=True)
class ColumnSelection:
    """
    Ordered selected column indices with the columns they refer to.

    Attributes:
        indices (np.ndarray): Selected column positions in [0, n2), in draw order.
        columns (np.ndarray): n1 x s matrix whose t-th column belongs to indices[t].
        flags (frozenset): Degenerate events met while selecting, e.g.
            ``"early_stop"``, ``"shortfall"``, ``"rank_truncated"``,
            ``"singular_gram"``, ``"empty_index_set"``.
        trace (tuple): Per-step diagnostic values (residual norms for greedy
            methods), empty when not recorded.
    """

    indices: np.ndarray
    columns: np.ndarray
    flags: frozenset = field(default_factory=frozenset)
    trace: tuple = ()

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=np.intp).ravel()
        columns = np.asarray(self.columns, dtype=np.float64)
        if columns.ndim != 2 or columns.shape[1] != indices.size:
            raise ParameterError(
                f"{indices.size} indices but columns have shape {columns.shape}"
            )
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "flags", frozenset(self.flags))

    def __len__(self):
        return int(self.indices.size)

    @property
    def distinct(self):
        return np.unique(self.indices)


@dataclass(frozen=True)
class Reconstruction:
    """
    CX approximation returned by a sampler.

    Attributes:
        coefficients (np.ndarray): s x n2 coefficient matrix X.
        approx (np.ndarray): n1 x n2 product C·X.
        sketch (np.ndarray | None): The sampled approximation M̂ that X was fit to.
    """

    coefficients: np.ndarray
    approx: np.ndarray
    sketch: np.ndarray = None

    @classmethod
    def from_columns(cls, columns, coefficients, sketch=None):
        return cls(coefficients, columns @ coefficients, sketch)


@dataclass
class IterNormConfig:
    """
    Parameters of iterative norm sampling.

    Attributes:
        k (int): Target rank, number of columns picked one at a time.
        m (float): Expected number of observed entries per column.
        epsilon (float): Accuracy parameter of the oversampling phase.
        delta (float): Failure probability.
        final_delta (float | None): Failure probability used for the last batch
            size only, defaults to ``delta``.
        phase2 (bool): Run the batched oversampling phase and the matrix
            approximation.
        rounds (int | None): Number of batched rounds T, defaults to
            ceil((k+1)·ln(k+1)).
        batch_sizes (list[int] | None): Per-round batch sizes s_1..s_T, defaults
            to 5k for every round but the last, which gets ceil(10k/(ε·δ)).
        index_mode (str): ``"bernoulli"`` or ``"fixed"`` per-column index sets.
    """

    k: int
    m: float
    epsilon: float = 0.5
    delta: float = 0.5
    final_delta: float = None
    phase2: bool = False
    rounds: int = None
    batch_sizes: list = None
    index_mode: str = "bernoulli"

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"k must be at least 1, got {self.k}")
        if self.m < 1:
            raise ParameterError(f"m must be at least 1, got {self.m}")
        if not 0 < self.epsilon:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if not 0 < self.delta <= 1:
            raise ParameterError(f"delta must lie in (0, 1], got {self.delta}")

        if self.rounds is None:
            self.rounds = max(1, math.ceil((self.k + 1) * math.log(self.k + 1)))
        if self.batch_sizes is None:
            last_delta = self.delta if self.final_delta is None else self.final_delta
            last = math.ceil(10 * self.k / (self.epsilon * last_delta))
            self.batch_sizes = [5 * self.k] * (self.rounds - 1) + [last]
        if len(self.batch_sizes) != self.rounds:
            raise ParameterError(
                f"{len(self.batch_sizes)} batch sizes given for {self.rounds} rounds"
            )
