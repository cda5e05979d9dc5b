import logging
from typing import NamedTuple

import numpy as np

from apps.dense_core.linalg import (
    gram_solve,
    orthonormal_basis,
    pinv_apply,
    project_onto,
    project_residual,
)
from apps.dense_core.structures import OrthoBasis
from apps.samplers.structures import ColumnSelection, Reconstruction, SamplingWeights
from utils.conf import css_setting
from utils.exceptions import DegenerateInputError, ParameterError

logger = logging.getLogger(__name__)


class ResidualEstimate(NamedTuple):
    value: float
    empty: bool = False
    singular: bool = False


def subsampled_residual_norm(x_omega, basis, omega, m):
    """
    Rescaled squared norm of a column's residual, seen only on Ω.

    Computes (n1/m)·‖x_Ω − U_Ω(U_ΩᵀU_Ω)⁻¹U_Ωᵀx_Ω‖², using a thresholded
    pseudo-inverse of the Gram matrix when it is singular.

    Args:
        x_omega (np.ndarray): Observed values of the column on Ω.
        basis (OrthoBasis): Basis U of the current span.
        omega (IndexSet): Observed row positions.
        m (float): Expected samples per column used for the rescaling.

    Returns:
        ResidualEstimate: The value plus ``empty`` (Ω was empty, value 0) and
        ``singular`` (the Gram matrix lost rank) flags.
    """

    x_omega = np.asarray(x_omega, dtype=np.float64).ravel()
    if x_omega.size != len(omega):
        raise ParameterError(
            f"{x_omega.size} values observed on {len(omega)} positions"
        )
    if len(omega) == 0:
        return ResidualEstimate(0.0, empty=True)

    scale = omega.universe / m
    if basis.dim == 0:
        return ResidualEstimate(scale * float(x_omega @ x_omega))

    sub_basis = basis.basis[omega.indices]
    weights, singular = gram_solve(sub_basis, x_omega)
    residual = x_omega - sub_basis @ weights
    return ResidualEstimate(scale * float(residual @ residual), singular=singular)


def _draw_samples(oracle, m, index_mode):
    n1, n2 = oracle.shape
    samples = []
    for i in range(n2):
        omega = oracle.index_set(n1, m, mode=index_mode)
        samples.append((omega, oracle.observe_column_entries(i, omega)))
    empty = sum(1 for omega, _ in samples if len(omega) == 0)
    if empty:
        logger.warning(f"{empty} of {n2} columns drew an empty index set")
    return samples


def _fully_observed(samples, n1):
    return all(len(omega) == n1 for omega, _ in samples)


def _residual_scores(samples, basis, m):
    n1 = basis.ambient_dim
    if _fully_observed(samples, n1):
        observed = np.column_stack([values for _, values in samples])
        residual = project_residual(observed, basis)
        return n1 / m * np.sum(residual**2, axis=0), False

    scores = np.zeros(len(samples))
    singular = False
    for i, (omega, values) in enumerate(samples):
        estimate = subsampled_residual_norm(values, basis, omega, m)
        scores[i] = estimate.value
        singular |= estimate.singular
    return scores, singular


def _complete(samples, basis):
    n1 = basis.ambient_dim
    if basis.dim == 0:
        return np.zeros((n1, len(samples))), False
    if _fully_observed(samples, n1):
        observed = np.column_stack([values for _, values in samples])
        return project_onto(observed, basis), False

    sketch = np.zeros((n1, len(samples)))
    singular = False
    for i, (omega, values) in enumerate(samples):
        if len(omega) == 0:
            continue
        weights, column_singular = gram_solve(basis.basis[omega.indices], values)
        sketch[:, i] = basis.basis @ weights
        singular |= column_singular
    return sketch, singular


def complete_columns(oracle, basis, m, index_mode="bernoulli"):
    """
    Complete every column of M inside span(basis) from a few entries each.

    Column i becomes U(U_ΩᵀU_Ω)⁻¹U_Ωᵀx_Ω with Ω drawn afresh with m expected
    positions. A column of M that lies in the span is reproduced exactly as
    long as its Gram matrix is invertible.

    Args:
        oracle (MatrixOracle): Access to M.
        basis (OrthoBasis): Basis U of the completion subspace.
        m (float): Expected samples per column.
        index_mode (str): ``"bernoulli"`` or ``"fixed"``.

    Returns:
        tuple: (M̂, singular) where singular reports a pseudo-inverse fallback.
    """

    if basis.ambient_dim != oracle.n1:
        raise ParameterError(
            f"basis lives in R^{basis.ambient_dim}, matrix has {oracle.n1} rows"
        )
    if basis.dim > m:
        logger.warning(
            f"Completing with a {basis.dim}-dimensional basis "
            f"from {m} samples per column"
        )
    sketch, singular = _complete(_draw_samples(oracle, m, index_mode), basis)
    if singular:
        logger.warning("Singular Gram matrix during completion, used pseudo-inverse")
    return sketch, singular


def iterative_norm_css(oracle, cfg):
    """
    Active iterative norm sampling.

    Phase 1 picks cfg.k columns one at a time, each with probability
    proportional to the estimated squared norm of its residual against the
    span of the columns picked so far. Columns already in the span score
    zero and are never picked twice. If the residual mass collapses to
    numerical zero the remaining picks are made uniformly among unpicked
    columns and the result carries the ``"early_stop"`` flag.

    With cfg.phase2, cfg.rounds batches of sizes cfg.batch_sizes are drawn
    (with replacement) by the same residual scores, every new column extends
    the span, and M̂ is assembled by projecting each column's samples onto the
    final span. X = S†M̂.

    Args:
        oracle (MatrixOracle): Access to M.
        cfg (IterNormConfig): Run parameters.

    Returns:
        tuple: (C, S, Reconstruction | None). Without phase 2, S is C and no
        reconstruction is returned.

    Raises:
        ParameterError: If cfg.k exceeds min(n1, n2).
        DegenerateInputError: If every observed entry is zero.
    """

    n1, n2 = oracle.shape
    if cfg.k > min(n1, n2):
        raise ParameterError(f"k must be at most {min(n1, n2)}, got {cfg.k}")

    tol = css_setting("RANK_TOL")
    samples = _draw_samples(oracle, cfg.m, cfg.index_mode)
    if any(len(omega) == 0 for omega, _ in samples):
        flags = {"empty_index_set"}
    else:
        flags = set()

    basis = OrthoBasis.empty(n1)
    known = {}
    picked = []
    first_total = None

    for step in range(cfg.k):
        scores, singular = _residual_scores(samples, basis, cfg.m)
        if singular:
            flags.add("singular_gram")
        scores[list(known)] = 0.0
        total = float(scores.sum())
        if first_total is None:
            if not total > 0:
                raise DegenerateInputError("every observed entry of the matrix is zero")
            first_total = total

        if total <= tol * first_total:
            unpicked = np.setdiff1d(np.arange(n2), picked)
            fill = oracle.rng.choice(unpicked, size=cfg.k - step, replace=False)
            logger.warning(
                f"Residual mass vanished after {step} picks, "
                f"choosing {fill.size} columns uniformly"
            )
            flags.add("early_stop")
            for j in fill.tolist():
                known[j] = oracle.observe_column(j)
                picked.append(j)
            break

        (j,), _ = SamplingWeights(scores, total).draw(oracle.rng, 1)
        j = int(j)
        known[j] = oracle.observe_column(j)
        picked.append(j)
        basis = orthonormal_basis(known[j], start=basis)
        logger.debug(f"Step {step + 1}: picked column {j}, residual mass {total:.3e}")

    selection = ColumnSelection(
        picked, np.column_stack([known[j] for j in picked]), flags
    )
    if not cfg.phase2:
        return selection, selection, None

    basis = orthonormal_basis(selection.columns, start=OrthoBasis.empty(n1))
    oversampled = list(picked)
    for round_number, size in enumerate(cfg.batch_sizes, start=1):
        scores, singular = _residual_scores(samples, basis, cfg.m)
        if singular:
            flags.add("singular_gram")
        scores[list(known)] = 0.0
        total = float(scores.sum())
        if total <= tol * first_total:
            logger.warning(f"Residual mass vanished before round {round_number}")
            flags.add("early_stop")
            break

        batch, _ = SamplingWeights(scores, total).draw(oracle.rng, size, replace=True)
        fresh = [j for j in dict.fromkeys(batch.tolist()) if j not in known]
        for j in fresh:
            known[j] = oracle.observe_column(j)
        oversampled.extend(batch.tolist())
        if fresh:
            basis = orthonormal_basis(
                np.column_stack([known[j] for j in fresh]), start=basis
            )

    sketch, singular = _complete(samples, basis)
    if singular:
        flags.add("singular_gram")
        logger.warning("Singular Gram matrix during completion, used pseudo-inverse")

    columns = np.column_stack([known[j] for j in oversampled])
    coefficients = pinv_apply(columns, sketch)
    logger.debug(
        f"Iterative norm sampling kept {len(oversampled)} columns, "
        f"span dimension {basis.dim}"
    )
    return (
        ColumnSelection(picked, selection.columns, flags),
        ColumnSelection(oversampled, columns, flags),
        Reconstruction.from_columns(columns, coefficients, sketch),
    )
