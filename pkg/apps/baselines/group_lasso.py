import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from apps.baselines.omp import check_masked
from apps.samplers.structures import ColumnSelection
from utils.conf import css_setting
from utils.exceptions import DegenerateInputError, ParameterError

logger = logging.getLogger(__name__)

BACKTRACKING = "backtracking"


@dataclass
class GroupLassoConfig:
    """
    Parameters of the row-sparse self-regression baseline.

    Attributes:
        lambda_ (float | None): Weight λ of the row penalty. ``None`` searches a
            geometric λ grid from λ_max downwards with warm starts.
        max_iters (int): Proximal gradient iterations per λ.
        step (float | str | None): Fixed step size, ``"backtracking"``, or
            ``None`` for 1/L with L = 2‖Y‖₂².
        tol (float): Relative objective change below which a solve may stop.
        kkt_tol (float): Bound on the gradient mapping norm required to stop.
        target_s (int | None): Number of columns to keep.
        grid_size (int | None): Number of grid values, defaults to
            ``GROUP_LASSO_GRID``.
    """

    lambda_: float = None
    max_iters: int = 5000
    step: object = None
    tol: float = 1e-10
    kkt_tol: float = 1e-7
    target_s: int = None
    grid_size: int = None

    def __post_init__(self):
        if self.lambda_ is not None and self.lambda_ < 0:
            raise ParameterError(f"lambda must be non-negative, got {self.lambda_}")
        if self.tol <= 0 or self.kkt_tol <= 0:
            raise ParameterError("tolerances must be positive")
        if self.max_iters < 1:
            raise ParameterError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.step is not None and self.step != BACKTRACKING:
            if not isinstance(self.step, (int, float)) or self.step <= 0:
                raise ParameterError(
                    f"step must be positive or {BACKTRACKING!r}, got {self.step!r}"
                )
        if self.target_s is not None and self.target_s < 1:
            raise ParameterError(f"target_s must be at least 1, got {self.target_s}")
        if self.lambda_ is None and self.target_s is None:
            raise ParameterError("a lambda search needs target_s")
        if self.grid_size is None:
            self.grid_size = css_setting("GROUP_LASSO_GRID")
        if self.grid_size < 1:
            raise ParameterError(f"grid_size must be at least 1, got {self.grid_size}")


def group_lasso_objective(masked, coefficients, lam):
    """‖Y − YX‖_F² + λ Σ_i ‖X_(i)‖₂ for Y = W∘M."""
    fit = masked - masked @ coefficients
    return float(np.sum(fit**2)) + lam * float(
        np.sum(np.linalg.norm(coefficients, axis=1))
    )


def _gradient(gram, coefficients):
    return 2.0 * (gram @ coefficients - gram)


def _off_diagonal(matrix):
    result = np.array(matrix)
    np.fill_diagonal(result, 0.0)
    return result


def _prox(point, threshold):
    point = _off_diagonal(point)
    norms = np.linalg.norm(point, axis=1)
    shrink = np.zeros_like(norms)
    alive = norms > threshold
    shrink[alive] = 1.0 - threshold / norms[alive]
    return point * shrink[:, None]


def kkt_residual(masked, coefficients, lam):
    """
    Largest violation of the optimality conditions at X.

    Diagonal entries are fixed at zero and excluded. A nonzero row must
    satisfy ∇_i + λ·X_(i)/‖X_(i)‖ = 0 and a zero row ‖∇_i‖ <= λ.
    """

    gram = masked.T @ masked
    gradient = _off_diagonal(_gradient(gram, coefficients))
    norms = np.linalg.norm(coefficients, axis=1)
    worst = 0.0
    for i, norm in enumerate(norms):
        if norm > 0:
            violation = np.linalg.norm(gradient[i] + lam * coefficients[i] / norm)
        else:
            violation = max(0.0, np.linalg.norm(gradient[i]) - lam)
        worst = max(worst, float(violation))
    return worst


def lambda_max(masked):
    """Smallest λ at which X = 0 is optimal: max_i ‖(2YᵀY)_(i)‖ off the diagonal."""
    gram = masked.T @ masked
    return float(np.max(np.linalg.norm(_off_diagonal(2.0 * gram), axis=1)))


def _solve(masked, lam, cfg, start):
    gram = masked.T @ masked
    lipschitz = 2.0 * float(scipy.linalg.norm(masked, 2)) ** 2
    if cfg.step is None:
        step = 1.0 / lipschitz if lipschitz > 0 else 1.0
    elif cfg.step == BACKTRACKING:
        step = 1.0
    else:
        step = float(cfg.step)

    coefficients = _off_diagonal(start)
    objective = group_lasso_objective(masked, coefficients, lam)
    history = [objective]
    converged = False

    for _ in range(cfg.max_iters):
        gradient = _gradient(gram, coefficients)
        if cfg.step == BACKTRACKING:
            smooth = objective - lam * float(
                np.sum(np.linalg.norm(coefficients, axis=1))
            )
            step *= 2.0
            while True:
                candidate = _prox(coefficients - step * gradient, step * lam)
                delta = candidate - coefficients
                candidate_smooth = float(np.sum((masked - masked @ candidate) ** 2))
                bound = (
                    smooth
                    + float(np.sum(gradient * delta))
                    + float(np.sum(delta**2)) / (2.0 * step)
                )
                if candidate_smooth <= bound + 1e-12 * max(1.0, abs(bound)):
                    break
                step /= 2.0
        else:
            candidate = _prox(coefficients - step * gradient, step * lam)

        mapping = float(np.linalg.norm(candidate - coefficients)) / step
        new_objective = group_lasso_objective(masked, candidate, lam)
        change = abs(objective - new_objective) / max(abs(objective), 1e-300)
        coefficients, objective = candidate, new_objective
        history.append(objective)
        if change < cfg.tol and mapping <= cfg.kkt_tol:
            converged = True
            break

    return coefficients, converged, history


def _nonzero_rows(coefficients):
    norms = np.linalg.norm(coefficients, axis=1)
    order = np.lexsort((np.arange(norms.size), -norms))
    return [int(i) for i in order if norms[i] > 0], norms


def group_lasso_css(masked, mask, cfg):
    """
    Row-sparse self-regression of the zero-filled matrix.

    Solves min ‖Y − YX‖_F² + λ‖X‖_{1,2} subject to diag(X) = 0 for Y = W∘M by
    proximal gradient: a gradient step, the diagonal set to zero, then a
    group soft-threshold of every row. Columns of nonzero rows are selected,
    largest row norm first, and cut to ``cfg.target_s``.

    With ``cfg.lambda_`` unset, λ runs down a geometric grid from λ_max to
    λ_max·1e-3 with warm starts and the first λ giving at least target_s
    nonzero rows is kept (the smallest λ if none does).

    Returns:
        tuple: (ColumnSelection, X). The selection's flags carry
        ``"not_converged"`` when max_iters was reached and its trace the
        objective values of the final solve.

    Raises:
        DegenerateInputError: If the masked matrix is all zero.
    """

    masked = check_masked(masked, mask)
    if not masked.any():
        raise DegenerateInputError("masked matrix has no nonzero observed entry")

    n2 = masked.shape[1]
    start = np.zeros((n2, n2))
    if cfg.lambda_ is not None:
        grid = [cfg.lambda_]
    else:
        top = lambda_max(masked)
        grid = list(top * np.geomspace(1.0, 1e-3, cfg.grid_size))

    for lam in grid:
        coefficients, converged, history = _solve(masked, lam, cfg, start)
        rows, _ = _nonzero_rows(coefficients)
        logger.debug(f"Group lasso at lambda={lam:.3e}: {len(rows)} nonzero rows")
        if cfg.target_s is not None and len(rows) >= cfg.target_s:
            break
        start = coefficients

    flags = set()
    if not converged:
        flags.add("not_converged")
        logger.warning(
            f"Group lasso stopped at max_iters={cfg.max_iters} without converging"
        )
    if cfg.target_s is not None:
        rows = rows[: cfg.target_s]
    if not rows:
        logger.warning(f"Group lasso at lambda={lam:.3e} selected no column")
    elif cfg.target_s is not None and len(rows) < cfg.target_s:
        flags.add("shortfall")
        logger.warning(f"Group lasso selected {len(rows)} of {cfg.target_s} columns")

    selection = ColumnSelection(rows, masked[:, rows], flags, tuple(history))
    return selection, coefficients


def least_squares_zero_diagonal(masked):
    """
    Unpenalized optimum: column j regressed on the other columns of Y.

    Reference solution of the λ = 0 problem for tests and diagnostics.
    """

    n2 = masked.shape[1]
    coefficients = np.zeros((n2, n2))
    for j in range(n2):
        others = [i for i in range(n2) if i != j]
        solution, *_ = scipy.linalg.lstsq(masked[:, others], masked[:, j])
        coefficients[others, j] = solution
    return coefficients

