import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from apps.dense_core.structures import as_dense
from apps.metrics.errors import selection_error
from utils.conf import css_setting
from utils.exceptions import DegenerateInputError, ParameterError


@dataclass(frozen=True)
class VolumeDistribution:
    """
    Exact volume sampling distribution over the k-subsets of columns.

    Attributes:
        k (int): Subset size.
        probs (dict): Maps each sorted k-tuple of column indices to p(C).
        squared_volumes (dict): Maps each k-tuple to vol(Δ(C))².
    """

    k: int
    probs: dict
    squared_volumes: dict

    def __getitem__(self, subset):
        return self.probs[tuple(sorted(subset))]

    def __len__(self):
        return len(self.probs)

    @property
    def total_volume(self):
        return math.fsum(self.squared_volumes.values())


def squared_simplex_volume(columns):
    """vol(Δ(C))² = det(CᵀC)/(k!)² for the simplex spanned by 0 and C's columns."""
    columns = np.asarray(columns, dtype=np.float64)
    k = columns.shape[1]
    gram_det = scipy.linalg.det(columns.T @ columns)
    return max(float(gram_det), 0.0) / math.factorial(k) ** 2


def volume_sampling_distribution(matrix, k):
    """
    Enumerate p(C) ∝ vol(Δ(C))² over every k-subset of the columns of M.

    Only meant as a ground truth for small matrices, the enumeration is
    guarded by ``VOLUME_MAX_COLUMNS`` and ``VOLUME_MAX_K``.

    Raises:
        ParameterError: If k or n2 exceed the guards, or k > n2.
        DegenerateInputError: If every k-subset has zero volume.
    """

    matrix = as_dense(matrix)
    n2 = matrix.shape[1]
    max_columns = css_setting("VOLUME_MAX_COLUMNS")
    max_k = css_setting("VOLUME_MAX_K")
    if n2 > max_columns:
        raise ParameterError(
            f"volume sampling enumerates at most {max_columns} columns"
        )
    if not 1 <= k <= min(max_k, n2):
        raise ParameterError(f"k must lie in [1, {min(max_k, n2)}], got {k}")

    volumes = {
        subset: squared_simplex_volume(matrix[:, subset])
        for subset in itertools.combinations(range(n2), k)
    }
    total = math.fsum(volumes.values())
    if not total > 0:
        raise DegenerateInputError(f"every {k}-subset of columns has zero volume")
    probs = {subset: volume / total for subset, volume in volumes.items()}
    return VolumeDistribution(k, probs, volumes)


def expected_volume_error(matrix, distribution):
    """E_C ‖M − CC†M‖_F² under a volume sampling distribution."""
    matrix = as_dense(matrix)
    return math.fsum(
        prob * selection_error(matrix, subset) ** 2
        for subset, prob in distribution.probs.items()
        if prob > 0
    )
