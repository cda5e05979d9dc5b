import logging
import warnings

import numpy as np
import scipy.linalg

from apps.dense_core.structures import as_dense
from utils.conf import css_setting
from utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

SPECTRAL_GAP_TOL = 1e-12


def vector_incoherence(x):
    """
    Peak-to-energy ratio μ(x) = n1·‖x‖∞²/‖x‖², a value in [1, n1].

    Raises:
        ParameterError: If x is the zero vector.
    """

    x = np.asarray(x, dtype=np.float64).ravel()
    energy = float(x @ x)
    if energy == 0.0:
        raise ParameterError("incoherence of the zero vector is undefined")
    return x.size * float(np.max(np.abs(x))) ** 2 / energy


def subspace_incoherence(basis):
    """
    Coherence μ(U) = (n1/d)·max_i ‖Uᵀe_i‖² of a d-dimensional subspace.

    Bases wider than the target rank use their own dimension d in place of
    k, so the value always lies in [1, n1/d].

    Raises:
        ParameterError: If the basis is empty.
    """

    if basis.dim == 0:
        raise ParameterError("incoherence of the zero subspace is undefined")
    row_norms = np.sum(basis.basis**2, axis=1)
    return basis.ambient_dim / basis.dim * float(np.max(row_norms))


def row_leverage_scores(matrix, k):
    """
    Unnormalized leverage scores l_j = ‖V_kᵀe_j‖² of the top-k row space.

    The scores sum to k. When σ_k and σ_{k+1} coincide the top-k subspace is
    not unique and a RuntimeWarning is issued; the scores then depend on the
    SVD realization.

    Args:
        matrix (array_like): n1 x n2 matrix M.
        k (int): Rank, at most the numerical rank of M.

    Returns:
        np.ndarray: One score per column of M.

    Raises:
        ParameterError: If k is outside [1, rank(M)].
    """

    matrix = as_dense(matrix)
    if not 1 <= k <= min(matrix.shape):
        raise ParameterError(f"k must lie in [1, {min(matrix.shape)}], got {k}")

    _, sigma, right_t = scipy.linalg.svd(matrix, full_matrices=False)
    if sigma[k - 1] <= css_setting("RANK_TOL") * sigma[0]:
        raise ParameterError(f"k={k} exceeds the numerical rank of the matrix")
    if k < sigma.size and sigma[k - 1] - sigma[k] <= SPECTRAL_GAP_TOL * sigma[0]:
        logger.warning(f"Repeated singular value at position {k}")
        warnings.warn(
            f"sigma_{k} equals sigma_{k + 1}, the top-{k} subspace is not unique",
            RuntimeWarning,
            stacklevel=2,
        )
    return np.sum(right_t[:k] ** 2, axis=0)
