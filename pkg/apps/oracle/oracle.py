import logging
from dataclasses import dataclass

import numpy as np

from apps.dense_core.structures import IndexSet, as_dense
from utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

INDEX_MODES = ("bernoulli", "fixed")


@dataclass(frozen=True)
class ObservationMask:
    """
    Boolean grid W of observed entries.

    Attributes:
        observed (np.ndarray): n1 x n2 boolean array, True where M[i, j] is seen.
    """

    observed: np.ndarray

    def __post_init__(self):
        observed = np.asarray(self.observed, dtype=bool)
        if observed.ndim != 2:
            raise ParameterError("mask must be two dimensional")
        observed.setflags(write=False)
        object.__setattr__(self, "observed", observed)

    @property
    def rows(self):
        return self.observed.shape[0]

    @property
    def cols(self):
        return self.observed.shape[1]

    @property
    def count(self):
        return int(self.observed.sum())


class MatrixOracle:
    """
    Gatekeeper to a hidden matrix M that charges every observation.

    Every entry, column and row query is counted; re-queried entries are
    charged again. A separate gauge tracks how many distinct entries have
    ever been revealed. All randomness of a run flows through ``rng`` so a
    seed fixes the whole query sequence.

    Attributes:
        hidden (np.ndarray): The ground-truth matrix M (never exposed by queries
            other than through the counted methods below).
        entry_queries (int): Number of single entries charged.
        column_queries (int): Number of full columns charged.
        row_queries (int): Number of full rows charged.
        rng_seed: Seed the generator was built from.
        rng (np.random.Generator): The run's random stream.
    """

    def __init__(self, hidden, seed=None):
        self.hidden = as_dense(hidden, "hidden matrix")
        self.hidden.setflags(write=False)
        self.entry_queries = 0
        self.column_queries = 0
        self.row_queries = 0
        self.rng_seed = seed
        self.rng = np.random.default_rng(seed)
        self._revealed = np.zeros(self.hidden.shape, dtype=bool)

    def __repr__(self):
        return (
            f"MatrixOracle(shape={self.shape}, entries={self.entry_queries}, "
            f"columns={self.column_queries}, rows={self.row_queries})"
        )

    @property
    def shape(self):
        return self.hidden.shape

    @property
    def n1(self):
        return self.hidden.shape[0]

    @property
    def n2(self):
        return self.hidden.shape[1]

    @property
    def total_entries_observed(self):
        return (
            self.entry_queries
            + self.column_queries * self.n1
            + self.row_queries * self.n2
        )

    @property
    def distinct_entries(self):
        return int(self._revealed.sum())

    def _check_row(self, i):
        if not 0 <= i < self.n1:
            raise ParameterError(f"row index {i} outside [0, {self.n1})")

    def _check_column(self, j):
        if not 0 <= j < self.n2:
            raise ParameterError(f"column index {j} outside [0, {self.n2})")

    def observe_entry(self, i, j):
        self._check_row(i)
        self._check_column(j)
        self.entry_queries += 1
        self._revealed[i, j] = True
        return float(self.hidden[i, j])

    def observe_column_entries(self, j, omega):
        """
        Observe the entries of column j at the positions of ``omega``.

        Each position is charged as one entry query.

        Args:
            j (int): Column index.
            omega (IndexSet): Row positions over universe n1.

        Returns:
            np.ndarray: x_{j,Ω}, the observed values in the order of omega.
        """

        self._check_column(j)
        if omega.universe != self.n1:
            raise ParameterError(
                f"index set over {omega.universe} rows, matrix has {self.n1}"
            )
        self.entry_queries += len(omega)
        self._revealed[omega.indices, j] = True
        return self.hidden[omega.indices, j].copy()

    def observe_column(self, j):
        self._check_column(j)
        self.column_queries += 1
        self._revealed[:, j] = True
        return self.hidden[:, j].copy()

    def observe_row(self, i):
        self._check_row(i)
        self.row_queries += 1
        self._revealed[i, :] = True
        return self.hidden[i, :].copy()

    def bernoulli_index_set(self, universe, p):
        """
        Include each of ``universe`` positions independently with probability p.

        Raises:
            ParameterError: If p lies outside [0, 1].
        """

        if not 0.0 <= p <= 1.0:
            raise ParameterError(f"probability must lie in [0, 1], got {p}")
        return IndexSet(universe, np.flatnonzero(self.rng.random(universe) < p))

    def fixed_size_index_set(self, universe, size):
        """Draw exactly ``size`` distinct positions uniformly without replacement."""

        if not 0 <= size <= universe:
            raise ParameterError(f"size must lie in [0, {universe}], got {size}")
        chosen = self.rng.choice(universe, size=size, replace=False)
        return IndexSet(universe, np.sort(chosen))

    def index_set(self, universe, expected, mode="bernoulli"):
        """
        Index set with ``expected`` positions on average.

        ``mode="bernoulli"`` draws Bernoulli(expected/universe) memberships;
        ``mode="fixed"`` draws round(expected) positions without replacement.
        Expectations above the universe size are clipped to the full set.
        """

        if mode not in INDEX_MODES:
            raise ParameterError(
                f"index mode must be one of {INDEX_MODES}, got {mode!r}"
            )
        if expected < 0:
            raise ParameterError(f"expected sample count must be >= 0, got {expected}")
        if mode == "fixed":
            size = min(universe, int(round(expected)))
            return self.fixed_size_index_set(universe, size)
        return self.bernoulli_index_set(universe, min(1.0, expected / universe))

    def bernoulli_mask(self, p):
        """Passive mask observing every entry independently with probability p."""

        if not 0.0 <= p <= 1.0:
            raise ParameterError(f"probability must lie in [0, 1], got {p}")
        return ObservationMask(self.rng.random(self.shape) < p)

    def masked_view(self, mask):
        """
        Zero-filled matrix W∘M, charging one entry query per observed entry.

        Raises:
            ParameterError: If the mask shape differs from M.
        """

        if mask.observed.shape != self.shape:
            raise ParameterError(
                f"mask shape {mask.observed.shape} does not match matrix {self.shape}"
            )
        self.entry_queries += mask.count
        self._revealed |= mask.observed
        logger.debug(f"Masked view revealed {mask.count} of {self.hidden.size} entries")
        return np.where(mask.observed, self.hidden, 0.0)
