import logging

import numpy as np

from apps.dense_core.linalg import pinv_apply, subsample_scale
from apps.samplers.structures import ColumnSelection, Reconstruction, SamplingWeights
from utils.exceptions import DegenerateInputError, ParameterError

logger = logging.getLogger(__name__)


def estimate_column_norms(oracle, m1, index_mode="bernoulli"):
    """
    Estimate squared column norms from a few entries per column.

    For every column i an index set Ω_i with m1 expected positions is drawn
    and ĉ_i = (n1/|Ω_i|)·‖x_{i,Ω_i}‖². A column whose index set comes out
    empty gets ĉ_i = 0.

    Args:
        oracle (MatrixOracle): Access to M, charged |Ω_i| entries per column.
        m1 (float): Expected number of samples per column.
        index_mode (str): ``"bernoulli"`` or ``"fixed"``.

    Returns:
        SamplingWeights: Scores ĉ and their total f̂.
    """

    if m1 < 1:
        raise ParameterError(f"m1 must be at least 1, got {m1}")

    n1, n2 = oracle.shape
    scores = np.zeros(n2)
    empty = 0
    for i in range(n2):
        omega = oracle.index_set(n1, m1, mode=index_mode)
        if len(omega) == 0:
            empty += 1
            continue
        values = oracle.observe_column_entries(i, omega)
        scores[i] = n1 / len(omega) * float(values @ values)

    if empty:
        logger.warning(f"{empty} of {n2} columns drew an empty index set, scored 0")
    return SamplingWeights.from_scores(scores)


def observe_columns(oracle, indices):
    n1 = oracle.n1
    if len(indices) == 0:
        return np.zeros((n1, 0))
    return np.column_stack([oracle.observe_column(int(j)) for j in indices])


def active_norm_css(
    oracle,
    s,
    m1,
    m2,
    k=None,
    with_replacement=False,
    index_mode="bernoulli",
):
    """
    Active norm sampling for column subset selection with missing data.

    The run consumes the oracle's random stream in a fixed order: norm
    estimation sets, then the column draws, then the approximation sets.

    1. Estimate squared column norms ĉ from m1 expected entries per column.
    2. Draw s columns with Pr[j] = ĉ_j/f̂ and observe them in full.
    3. Build M̂ column by column from R_Ω(x_i) with Ω ~ Bernoulli(m_{2,i}/n1),
       m_{2,i} = m2·n2·ĉ_i/f̂. ``m2 >= n1`` means every column is observed in
       full so that M̂ = M.
    4. Fit X = C†M̂.

    Args:
        oracle (MatrixOracle): Access to M.
        s (int): Number of columns to select, at most n2 unless drawing with
            replacement.
        m1 (float): Expected samples per column for norm estimation.
        m2 (float): Expected samples per column for the approximation.
        k (int | None): Target rank the run is compared against, logged only.
        with_replacement (bool): Draw columns with replacement.
        index_mode (str): ``"bernoulli"`` or ``"fixed"`` index sets.

    Returns:
        tuple: (ColumnSelection, Reconstruction).

    Raises:
        DegenerateInputError: If every estimated norm is zero.
    """

    n1, n2 = oracle.shape
    if s < 1 or (s > n2 and not with_replacement):
        raise ParameterError(f"s must lie in [1, {n2}], got {s}")
    if m2 < 1:
        raise ParameterError(f"m2 must be at least 1, got {m2}")

    weights = estimate_column_norms(oracle, m1, index_mode=index_mode)
    if not weights.total > 0:
        raise DegenerateInputError("every estimated column norm is zero")

    indices, shortfall = weights.draw(oracle.rng, s, replace=with_replacement)
    flags = {"shortfall"} if shortfall else set()
    if shortfall:
        logger.warning(f"Only {len(indices)} of {s} columns carry nonzero weight")
    columns = observe_columns(oracle, indices)

    sketch = np.zeros((n1, n2))
    full = m2 >= n1
    for i in range(n2):
        expected = n1 if full else m2 * n2 * weights.scores[i] / weights.total
        omega = oracle.index_set(n1, expected, mode=index_mode)
        if len(omega) == 0:
            continue
        column = np.zeros(n1)
        column[omega.indices] = oracle.observe_column_entries(i, omega)
        sketch[:, i] = subsample_scale(column, omega)

    coefficients = pinv_apply(columns, sketch)
    logger.debug(
        f"Norm sampling picked {len(indices)} columns (k={k}) "
        f"after {oracle.total_entries_observed} observed entries"
    )
    return (
        ColumnSelection(indices, columns, flags),
        Reconstruction.from_columns(columns, coefficients, sketch),
    )


def uniform_css(oracle, s):
    """
    Uniform baseline: s distinct columns chosen uniformly, observed in full.

    Raises:
        ParameterError: If s is outside [1, n2].
    """

    n2 = oracle.n2
    if not 1 <= s <= n2:
        raise ParameterError(f"s must lie in [1, {n2}], got {s}")
    indices = oracle.rng.choice(n2, size=s, replace=False)
    return ColumnSelection(indices, observe_columns(oracle, indices))
