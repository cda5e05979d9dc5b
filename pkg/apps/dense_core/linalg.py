import numpy as np
import scipy.linalg

from apps.dense_core.structures import IndexSet, OrthoBasis, as_dense
from utils.conf import css_setting
from utils.exceptions import ParameterError


def orthonormal_basis(columns, tol=None, start=None):
    """
    Build an orthonormal basis of the span of ``columns``.

    Columns are processed left to right; each is projected onto the orthogonal
    complement of the vectors accepted so far, twice (classical Gram-Schmidt
    with one re-orthogonalization pass). A column whose remaining norm is at
    most ``tol`` times the largest input column norm is numerically dependent
    and is dropped.

    Args:
        columns (array_like): n1 x c matrix (or a single vector).
        tol (float): Relative rank tolerance, defaults to ``RANK_TOL``.
        start (OrthoBasis): Existing basis to extend, its vectors are kept as is.

    Returns:
        OrthoBasis: Basis of span(start, columns). An all-zero input yields the
        start basis (dimension 0 when no start is given).

    Raises:
        ParameterError: If tol is not positive or the dimensions disagree.
    """

    tol = css_setting("RANK_TOL") if tol is None else tol
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")

    matrix = as_dense(columns, "columns")
    n1 = matrix.shape[0]
    if start is not None and start.ambient_dim != n1:
        raise ParameterError(
            f"start basis lives in R^{start.ambient_dim}, columns in R^{n1}"
        )

    accepted = np.zeros((n1, 0)) if start is None else np.array(start.basis)
    scale = float(np.max(np.linalg.norm(matrix, axis=0)))
    if scale == 0.0:
        return start if start is not None else OrthoBasis.empty(n1)

    cutoff = tol * scale
    for column in matrix.T:
        vector = column.copy()
        for _ in range(2):
            vector -= accepted @ (accepted.T @ vector)
        norm = np.linalg.norm(vector)
        if norm > cutoff and accepted.shape[1] < n1:
            accepted = np.column_stack([accepted, vector / norm])

    return OrthoBasis(accepted)


def truncated_svd(matrix, k):
    """
    Top-k singular triplets of a dense matrix.

    Args:
        matrix (array_like): n1 x n2 input M.
        k (int): Number of triplets, 1 <= k <= min(n1, n2).

    Returns:
        tuple: (U, sigma, V) with U, V OrthoBasis of dimension k and sigma the
        nonincreasing singular values. U·diag(sigma)·Vᵀ is the best rank-k
        approximation of M in Frobenius norm.

    Raises:
        ParameterError: If k is out of range.
    """

    matrix = as_dense(matrix)
    if not 1 <= k <= min(matrix.shape):
        raise ParameterError(f"k must lie in [1, {min(matrix.shape)}], got {k}")

    left, sigma, right_t = scipy.linalg.svd(matrix, full_matrices=False)
    return OrthoBasis(left[:, :k]), sigma[:k], OrthoBasis(right_t[:k].T)


def singular_values(matrix):
    return scipy.linalg.svdvals(as_dense(matrix))


def best_rank_error(matrix, k):
    """‖M − M_k‖_F computed from the tail of the spectrum."""
    sigma = singular_values(matrix)
    if k < 0:
        raise ParameterError(f"k must be non-negative, got {k}")
    return float(np.sqrt(np.sum(sigma[k:] ** 2)))


def low_rank_approximation(matrix, k):
    left, sigma, right = truncated_svd(matrix, k)
    return (left.basis * sigma) @ right.basis.T


def project_residual(x, basis):
    """
    Remove the component of ``x`` that lies in the span of ``basis``.

    Args:
        x (array_like): Vector of length n1, or an n1 x c matrix of columns.
        basis (OrthoBasis): Orthonormal basis U.

    Returns:
        np.ndarray: x − U(Uᵀx), same shape as x.
    """

    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != basis.ambient_dim:
        raise ParameterError(
            f"vector length {x.shape[0]} does not match "
            f"ambient dimension {basis.ambient_dim}"
        )
    if basis.dim == 0:
        return x.copy()
    return x - basis.basis @ (basis.basis.T @ x)


def project_onto(x, basis):
    """Orthogonal projection U(Uᵀx) of x onto span(basis)."""
    x = np.asarray(x, dtype=np.float64)
    return x - project_residual(x, basis)


def pinv_apply(columns, matrix, tol=None):
    """
    Least-squares coefficients X = C†M.

    Singular values of C below ``tol`` times the largest one are treated as
    zero, so rank deficient C is handled without error.

    Args:
        columns (array_like): n1 x s matrix C.
        matrix (array_like): n1 x n2 matrix M.
        tol (float): Relative pseudoinverse threshold, defaults to ``PINV_TOL``.

    Returns:
        np.ndarray: s x n2 coefficient matrix with C·X = P_span(C)(M).
    """

    tol = css_setting("PINV_TOL") if tol is None else tol
    columns = as_dense(columns, "C")
    matrix = as_dense(matrix, "M")
    if columns.shape[0] != matrix.shape[0]:
        raise ParameterError(
            f"C has {columns.shape[0]} rows but M has {matrix.shape[0]}"
        )
    return scipy.linalg.pinv(columns, atol=0.0, rtol=tol) @ matrix


def gram_solve(sub_basis, values, tol=None):
    """
    Solve (U_Ωᵀ U_Ω) w = U_Ωᵀ x_Ω with a thresholded pseudo-inverse.

    Args:
        sub_basis (np.ndarray): |Ω| x d rows of the basis restricted to Ω.
        values (np.ndarray): x_Ω, a vector or |Ω| x c matrix.
        tol (float): Relative threshold on the Gram spectrum.

    Returns:
        tuple: (w, singular) where singular is True when the Gram matrix lost
        rank at the given tolerance.
    """

    tol = css_setting("PINV_TOL") if tol is None else tol
    gram = sub_basis.T @ sub_basis
    inverse, rank = scipy.linalg.pinvh(gram, atol=0.0, rtol=tol, return_rank=True)
    return inverse @ (sub_basis.T @ values), rank < gram.shape[0]


def subsample_scale(x, omega):
    """
    Rescaled subsampling operator R_Ω(x) = (n1/|Ω|)·1_Ω∘x.

    Args:
        x (array_like): Vector of length n1 = omega.universe.
        omega (IndexSet): Observed positions.

    Returns:
        np.ndarray: Vector equal to (n1/|Ω|)·x on Ω and zero elsewhere.

    Raises:
        ParameterError: If Ω is empty or the lengths disagree.
    """

    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size != omega.universe:
        raise ParameterError(
            f"vector length {x.size} does not match universe {omega.universe}"
        )
    if len(omega) == 0:
        raise ParameterError("cannot rescale over an empty index set")

    result = np.zeros_like(x)
    result[omega.indices] = (omega.universe / len(omega)) * x[omega.indices]
    return result


def index_set(universe, indices):
    """Build an IndexSet from unsorted, possibly repeated positions."""
    return IndexSet(universe, np.unique(np.asarray(indices, dtype=np.intp)))
