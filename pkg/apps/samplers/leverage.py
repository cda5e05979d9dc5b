import logging

import numpy as np
import scipy.linalg

from apps.samplers.norm import observe_columns
from apps.samplers.structures import ColumnSelection, SamplingWeights
from utils.conf import css_setting
from utils.exceptions import DegenerateInputError, ParameterError

logger = logging.getLogger(__name__)


def estimate_leverage_scores(rows, k, tol=None):
    """
    Unnormalized leverage scores of the top-k row space of observed rows.

    Args:
        rows (np.ndarray): r x n2 matrix of fully observed rows.
        k (int): Target rank.
        tol (float): Relative threshold defining the numerical rank.

    Returns:
        tuple: (scores, k_used) where scores[j] = ‖S_kᵀe_j‖² and k_used is k
        truncated to the numerical rank of the rows.
    """

    tol = css_setting("RANK_TOL") if tol is None else tol
    _, sigma, right_t = scipy.linalg.svd(rows, full_matrices=False)
    rank = int(np.sum(sigma > tol * sigma[0])) if sigma.size and sigma[0] > 0 else 0
    k_used = min(k, rank)
    scores = np.sum(right_t[:k_used] ** 2, axis=0)
    # scores lie in [0, 1], round-off on all-zero columns is cut to exact zero
    scores[scores < tol] = 0.0
    return scores, k_used


def approx_leverage_css(
    oracle,
    k,
    s,
    m,
    with_replacement=False,
    index_mode="bernoulli",
):
    """
    Approximate leverage score sampling.

    Rows are observed in full with probability m/n1 each; the top-k right
    singular vectors S_k of the stacked rows give scores l̃_j = ‖S_kᵀe_j‖²,
    and s columns are drawn with Pr[j] = l̃_j/k and observed in full. When
    the observed rows have rank below k, k is truncated to that rank and the
    selection carries the ``"rank_truncated"`` flag.

    Args:
        oracle (MatrixOracle): Access to M.
        k (int): Target rank, at most min(n1, n2).
        s (int): Number of columns to select.
        m (float): Expected number of observed rows.
        with_replacement (bool): Draw columns with replacement.
        index_mode (str): ``"bernoulli"`` or ``"fixed"`` row sets.

    Returns:
        ColumnSelection: The selected columns.

    Raises:
        DegenerateInputError: If the observed rows are all zero (or none were drawn).
    """

    n1, n2 = oracle.shape
    if not 1 <= k <= min(n1, n2):
        raise ParameterError(f"k must lie in [1, {min(n1, n2)}], got {k}")
    if s < 1:
        raise ParameterError(f"s must be at least 1, got {s}")

    omega = oracle.index_set(n1, m, mode=index_mode)
    if len(omega) == 0:
        raise DegenerateInputError("no rows were observed")
    rows = np.vstack([oracle.observe_row(i) for i in omega])

    scores, k_used = estimate_leverage_scores(rows, k)
    if k_used == 0:
        raise DegenerateInputError("observed rows are numerically zero")

    flags = set()
    if k_used < k:
        flags.add("rank_truncated")
        logger.warning(
            f"Observed {len(omega)} rows of rank {k_used}, truncating k from {k}"
        )

    weights = SamplingWeights.from_scores(scores)
    indices, shortfall = weights.draw(oracle.rng, s, replace=with_replacement)
    if shortfall:
        flags.add("shortfall")
        logger.warning(f"Only {len(indices)} of {s} columns carry leverage")

    logger.debug(f"Leverage sampling from {len(omega)} rows, k={k_used}")
    return ColumnSelection(indices, observe_columns(oracle, indices), flags)
