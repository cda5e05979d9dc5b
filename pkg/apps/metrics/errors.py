import math
from dataclasses import dataclass

import numpy as np

from apps.dense_core.linalg import best_rank_error, orthonormal_basis, project_residual
from apps.dense_core.structures import as_dense
from utils.exceptions import ParameterError


@dataclass(frozen=True)
class ErrorReport:
    """
    Errors of one column selection against the hidden matrix.

    Attributes:
        selection_error (float): ‖M − CC†M‖_F.
        oracle_error (float): ‖M − M_k‖_F, the best rank-k error.
        frobenius_norm (float): ‖M‖_F.
        reconstruction_error (float | None): ‖M − CX‖_F for the returned X.
    """

    selection_error: float
    oracle_error: float
    frobenius_norm: float
    reconstruction_error: float = None

    @property
    def relative_ratio(self):
        if self.oracle_error == 0.0:
            return math.inf if self.selection_error > 0.0 else 1.0
        return self.selection_error / self.oracle_error

    @property
    def relative_selection_error(self):
        if self.frobenius_norm == 0.0:
            return 0.0
        return self.selection_error / self.frobenius_norm

    def as_dict(self):
        return {
            "selection_error": self.selection_error,
            "reconstruction_error": self.reconstruction_error,
            "oracle_error": self.oracle_error,
            "relative_ratio": self.relative_ratio,
            "relative_selection_error": self.relative_selection_error,
        }


def _selected_indices(selection):
    indices = np.asarray(getattr(selection, "indices", selection), dtype=np.intp)
    return indices.ravel()


def selection_error(matrix, selection):
    """
    ‖M − CC†M‖_F where C holds the columns of M picked by ``selection``.

    The columns are read from M itself, so a selection made on a masked or
    noisy copy is judged against the true matrix.

    Args:
        matrix (array_like): n1 x n2 matrix M.
        selection (ColumnSelection | Sequence[int]): Selected column indices.

    Returns:
        float: The residual of M after projection onto span(C).

    Raises:
        ParameterError: If the selection is empty or out of range.
    """

    matrix = as_dense(matrix)
    indices = _selected_indices(selection)
    if indices.size == 0:
        raise ParameterError("selection must contain at least one column")
    if indices.min() < 0 or indices.max() >= matrix.shape[1]:
        raise ParameterError(f"selected columns outside [0, {matrix.shape[1]})")

    basis = orthonormal_basis(matrix[:, indices])
    return float(np.linalg.norm(project_residual(matrix, basis)))


def reconstruction_error(matrix, columns, coefficients):
    """‖M − C·X‖_F."""
    matrix = as_dense(matrix)
    columns = np.asarray(columns, dtype=np.float64)
    coefficients = np.asarray(coefficients, dtype=np.float64)
    if columns.shape[1] != coefficients.shape[0] or (
        (columns.shape[0], coefficients.shape[1]) != matrix.shape
    ):
        raise ParameterError(
            f"C {columns.shape} and X {coefficients.shape} do not multiply "
            f"to M {matrix.shape}"
        )
    return float(np.linalg.norm(matrix - columns @ coefficients))


def error_report(matrix, selection, k, reconstruction=None):
    """
    Build the ErrorReport of a selection.

    Args:
        matrix (array_like): Hidden matrix M.
        selection (ColumnSelection | Sequence[int]): Selected columns.
        k (int): Rank of the oracle error ‖M − M_k‖_F.
        reconstruction (Reconstruction | None): Sampler output whose
            coefficients are scored against the columns of the selection.
    """

    matrix = as_dense(matrix)
    recon = None
    if reconstruction is not None:
        recon = float(np.linalg.norm(matrix - reconstruction.approx))
    return ErrorReport(
        selection_error=selection_error(matrix, selection),
        oracle_error=best_rank_error(matrix, k),
        frobenius_norm=float(np.linalg.norm(matrix)),
        reconstruction_error=recon,
    )
