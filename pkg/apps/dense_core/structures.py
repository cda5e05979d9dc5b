from dataclasses import dataclass, field

import numpy as np

from utils.exceptions import ParameterError


def as_dense(matrix, name="matrix"):
    """
    Validate and convert input to a dense column-major float matrix.

    A 1-D input is treated as a single column.

    Args:
        matrix (array_like): The input values.
        name (str): Name used in error messages.

    Returns:
        np.ndarray: Fortran-ordered float64 array of shape (n1, n2).

    Raises:
        ParameterError: If the input is empty, not 2-D or has non-finite entries.
    """

    array = np.asarray(matrix, dtype=np.float64)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    if array.ndim != 2:
        raise ParameterError(f"{name} must be two dimensional, got {array.ndim} axes")
    if array.shape[0] < 1 or array.shape[1] < 1:
        raise ParameterError(f"{name} must be non-empty, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ParameterError(f"{name} contains NaN or infinite entries")
    return np.asfortranarray(array)


@dataclass(frozen=True)
class OrthoBasis:
    """
    Orthonormal basis of a subspace of R^n1.

    Attributes:
        basis (np.ndarray): n1 x d matrix with orthonormal columns (d may be 0).
    """

    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=np.float64)
        if basis.ndim != 2:
            raise ParameterError("basis must be a two dimensional array")
        if basis.shape[1] > basis.shape[0]:
            raise ParameterError(
                f"basis dimension {basis.shape[1]} exceeds "
                f"ambient dimension {basis.shape[0]}"
            )
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def empty(cls, ambient_dim):
        return cls(np.zeros((ambient_dim, 0)))

    @property
    def ambient_dim(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    def orthogonality_defect(self):
        """Frobenius distance between basisᵀ·basis and the identity."""
        gram = self.basis.T @ self.basis
        return float(np.linalg.norm(gram - np.eye(self.dim)))


@dataclass(frozen=True)
class IndexSet:
    """
    Sorted set of distinct 0-based positions in [0, universe).

    Attributes:
        universe (int): Size of the ground set (n1 for row positions).
        indices (np.ndarray): Strictly increasing integer positions.
    """

    universe: int
    indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.intp))

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=np.intp).ravel()
        if self.universe < 0:
            raise ParameterError("universe must be non-negative")
        if indices.size:
            if np.any(np.diff(indices) <= 0):
                raise ParameterError("indices must be strictly increasing")
            if indices[0] < 0 or indices[-1] >= self.universe:
                raise ParameterError(
                    f"indices must lie in [0, {self.universe}), "
                    f"got {indices[0]}..{indices[-1]}"
                )
        indices.setflags(write=False)
        object.__setattr__(self, "indices", indices)

    @classmethod
    def full(cls, universe):
        return cls(universe, np.arange(universe))

    def __len__(self):
        return int(self.indices.size)

    def __iter__(self):
        return iter(self.indices.tolist())

    def __contains__(self, position):
        return bool(np.isin(position, self.indices))
