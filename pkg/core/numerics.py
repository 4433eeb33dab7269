"""
Shared numerical helpers

Norms, summation, subspace geometry and multiset matching used by the
matrix calculus and the iteration engine.
"""
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from core.config import settings


def frobenius(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix, "fro"))


def operator_norm(
    matrix: np.ndarray,
    iterations: int = settings.norm_iterations,
    tol: float = settings.norm_tol,
) -> float:
    """
    Operator 2-norm by power iteration on M*M

    Args:
        matrix: square or rectangular complex matrix
        iterations: maximum power steps
        tol: relative change that stops the iteration

    Returns:
        float: largest singular value estimate
    """
    m = np.asarray(matrix, dtype=complex)
    if m.size == 0 or not np.any(m):
        return 0.0

    # fixed start vector keeps norms reproducible run to run
    rng = np.random.default_rng(0)
    v = rng.standard_normal(m.shape[1]) + 1j * rng.standard_normal(m.shape[1])
    v /= np.linalg.norm(v)

    estimate = 0.0
    for _ in range(iterations):
        w = m.conj().T @ (m @ v)
        w_norm = np.linalg.norm(w)
        if w_norm == 0.0:
            break
        v = w / w_norm
        new_estimate = float(np.linalg.norm(m @ v))
        if abs(new_estimate - estimate) <= tol * max(new_estimate, 1.0):
            estimate = new_estimate
            break
        estimate = new_estimate
    return estimate


def pairwise_sum(terms: Sequence[np.ndarray]) -> np.ndarray:
    """Order-independent pairwise summation of equally shaped arrays"""
    if len(terms) == 1:
        return np.array(terms[0], copy=True)
    middle = len(terms) // 2
    return pairwise_sum(terms[:middle]) + pairwise_sum(terms[middle:])


def normality_residual(matrix: np.ndarray) -> float:
    m = np.asarray(matrix, dtype=complex)
    return frobenius(m @ m.conj().T - m.conj().T @ m)


def is_normal(matrix: np.ndarray, rel_tol: float = 1e-8) -> bool:
    scale = frobenius(matrix) ** 2
    return normality_residual(matrix) <= rel_tol * max(scale, 1e-300)


def cluster_values(values: np.ndarray, radius: float = settings.cluster_radius) -> np.ndarray:
    """Replace values lying within `radius` of each other by their cluster mean"""
    values = np.asarray(values, dtype=complex).copy()
    labels = -np.ones(len(values), dtype=int)
    current = 0
    for i in range(len(values)):
        if labels[i] >= 0:
            continue
        members = [i]
        labels[i] = current
        # grow the cluster transitively
        frontier = [i]
        while frontier:
            j = frontier.pop()
            close = np.where((labels < 0) & (np.abs(values - values[j]) < radius))[0]
            for k in close:
                labels[k] = current
                members.append(int(k))
                frontier.append(int(k))
        values[members] = np.mean(values[members])
        current += 1
    return values


def null_space_basis(matrix: np.ndarray, rank_tol: float = settings.rank_tol) -> np.ndarray:
    """
    Orthonormal basis of the numerical kernel

    Singular values below rank_tol * sigma_max count as zero. A zero matrix
    has the whole space as kernel.
    """
    m = np.asarray(matrix, dtype=complex)
    n = m.shape[1]
    _, sigma, vh = scipy.linalg.svd(m, full_matrices=True)
    sigma_max = sigma[0] if sigma.size else 0.0
    if sigma_max == 0.0:
        return np.eye(n, dtype=complex)
    rank = int(np.sum(sigma >= rank_tol * sigma_max))
    return vh[rank:].conj().T


def range_basis(matrix: np.ndarray, rank_tol: float = settings.rank_tol) -> np.ndarray:
    """Orthonormal basis of the numerical column space"""
    m = np.asarray(matrix, dtype=complex)
    u, sigma, _ = scipy.linalg.svd(m, full_matrices=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return np.zeros((m.shape[0], 0), dtype=complex)
    rank = int(np.sum(sigma >= rank_tol * sigma[0]))
    return u[:, :rank]


def subspace_angle(basis_a: np.ndarray, basis_b: np.ndarray) -> float:
    """
    Largest principal angle between two subspaces

    Subspaces of different dimension are at angle pi/2; two trivial
    subspaces coincide.
    """
    if basis_a.shape[1] != basis_b.shape[1]:
        return float(np.pi / 2)
    if basis_a.shape[1] == 0:
        return 0.0
    return float(np.max(scipy.linalg.subspace_angles(basis_a, basis_b)))


def multiset_distance(left: Sequence[complex], right: Sequence[complex]) -> float:
    """
    Bottleneck distance between equal-size complex multisets: the smallest
    d admitting a perfect matching with every matched pair within d

    Binary search over the distinct pair distances.
    """
    a = np.asarray(left, dtype=complex).ravel()
    b = np.asarray(right, dtype=complex).ravel()
    if a.shape != b.shape:
        return float("inf")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    levels = np.unique(cost)
    lo, hi = 0, levels.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching(cost <= levels[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(levels[lo])


def _perfect_matching(allowed: np.ndarray) -> bool:
    matching = maximum_bipartite_matching(csr_matrix(allowed.astype(np.int8)), perm_type="column")
    return bool(np.all(matching >= 0))


def log_slope(values: Sequence[float], start: int, stop: int) -> float:
    """Least-squares slope of log|values[m]| against m over [start, stop]"""
    m = np.arange(start, stop + 1)
    logs = np.log(np.abs(np.asarray(values, dtype=complex)[start:stop + 1]))
    slope, _ = np.polyfit(m, logs, 1)
    return float(slope)
