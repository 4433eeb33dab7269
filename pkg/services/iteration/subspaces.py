"""
Fixed Spaces

Numerical kernels of I - T and their intersections over several layers.
"""
from typing import Sequence, Union

import numpy as np

from core.config import settings
from core.errors import IncompatibleDimsError
from core.numerics import null_space_basis, range_basis, subspace_angle
from models.operators import DenseOperator, NormalOperator, SubspaceBasis, as_matrix

MatrixLike = Union[DenseOperator, NormalOperator, np.ndarray]


def fixed_space(T: MatrixLike, rank_tol: float = settings.rank_tol) -> SubspaceBasis:
    """
    Orthonormal basis of ker(I - T)

    Singular values of I - T below rank_tol * sigma_max count as zero.
    """
    matrix = as_matrix(T)
    defect = np.eye(matrix.shape[0]) - matrix
    return SubspaceBasis(null_space_basis(defect, rank_tol), rank_tol)


def joint_fixed_space(layers: Sequence[MatrixLike], rank_tol: float = settings.rank_tol) -> SubspaceBasis:
    """
    Intersection of ker(I - T_k) over all layers

    Raises:
        IncompatibleDimsError: empty list or mismatched dimensions
    """
    if not layers:
        raise IncompatibleDimsError("joint fixed space needs at least one layer")
    matrices = [as_matrix(layer) for layer in layers]
    shapes = {m.shape for m in matrices}
    if len(shapes) != 1:
        raise IncompatibleDimsError(f"layers have different shapes: {sorted(shapes)}")

    n = matrices[0].shape[0]
    stacked = np.vstack([np.eye(n) - m for m in matrices])
    return SubspaceBasis(null_space_basis(stacked, rank_tol), rank_tol)


def range_space(P: MatrixLike, rank_tol: float = settings.rank_tol) -> SubspaceBasis:
    return SubspaceBasis(range_basis(as_matrix(P), rank_tol), rank_tol)


def angle_between(first: SubspaceBasis, second: SubspaceBasis) -> float:
    """Largest principal angle (pi/2 for different dimensions)"""
    return subspace_angle(first.basis, second.basis)
