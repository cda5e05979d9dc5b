import logging

import numpy as np

from apps.dense_core.linalg import orthonormal_basis, project_residual
from apps.dense_core.structures import OrthoBasis, as_dense
from apps.samplers.structures import ColumnSelection
from utils.exceptions import DegenerateInputError, ParameterError

logger = logging.getLogger(__name__)


def check_masked(masked, mask):
    masked = as_dense(masked, "masked matrix")
    if mask.observed.shape != masked.shape:
        raise ParameterError(
            f"mask shape {mask.observed.shape} does not match {masked.shape}"
        )
    return masked


def block_omp_css(masked, mask, s):
    """
    Block orthogonal matching pursuit on a zero-filled matrix.

    With Y = W∘M, step t forms D = Yᵀ(W∘Y⁽ᵗ⁾) and picks the unselected column
    whose row of D has the largest norm, lowest index first on ties. The
    residual is then Y⁽ᵗ⁺¹⁾ = Y − P_C(Y) for the span C of the picked columns
    of Y.

    Args:
        masked (np.ndarray): Zero-filled observations W∘M.
        mask (ObservationMask): The observation pattern W.
        s (int): Number of columns, 1 <= s <= n2.

    Returns:
        ColumnSelection: s distinct indices, the zero-filled columns and the
        trace of residual norms ‖Y⁽ᵗ⁾‖_F, one per step plus the final one.

    Raises:
        DegenerateInputError: If the masked matrix is all zero.
    """

    masked = check_masked(masked, mask)
    n1, n2 = masked.shape
    if not 1 <= s <= n2:
        raise ParameterError(f"s must lie in [1, {n2}], got {s}")
    if not masked.any():
        raise DegenerateInputError("masked matrix has no nonzero observed entry")

    observed = mask.observed
    residual = masked
    basis = OrthoBasis.empty(n1)
    picked = []
    trace = [float(np.linalg.norm(residual))]
    flags = set()

    for step in range(s):
        correlation = masked.T @ np.where(observed, residual, 0.0)
        scores = np.linalg.norm(correlation, axis=1)
        scores[picked] = -np.inf
        j = int(np.argmax(scores))
        if scores[j] == 0.0:
            flags.add("early_stop")
        picked.append(j)
        basis = orthonormal_basis(masked[:, j], start=basis)
        residual = project_residual(masked, basis)
        trace.append(float(np.linalg.norm(residual)))
        logger.debug(f"Block OMP step {step + 1}: column {j}, residual {trace[-1]:.3e}")

    if flags:
        logger.warning("Block OMP residual correlation vanished before s picks")
    return ColumnSelection(picked, masked[:, picked], flags, tuple(trace))
