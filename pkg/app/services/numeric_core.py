"""Dense linear algebra substrate.

All functions are pure: they never mutate their arguments and may be called
concurrently on independent data. Tolerances are relative to max(1, ||input||).
"""

import logging
from typing import Callable

import numpy as np
from scipy import linalg

from ..config import settings
from ..exceptions import InvalidMatrix, NotHermitian, NotInvertible, NotSquare
from ..models.base import finite_array
from ..models.models import EigenDecomposition, SvdResult

logger = logging.getLogger(__name__)


def as_matrix(m) -> np.ndarray:
    try:
        return finite_array(m, ndim=2)
    except ValueError as e:
        raise InvalidMatrix(str(e)) from e


def _square(m) -> np.ndarray:
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {arr.shape}")
    return arr


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def scale(m: np.ndarray) -> float:
    """max(1, ||m||), the reference magnitude for relative tolerances."""
    return max(1.0, operator_norm(m))


def hermitian_eig(m, hermitian_tol: float | None = None) -> EigenDecomposition:
    arr = _square(m)
    tol = settings.HERMITIAN_TOL if hermitian_tol is None else hermitian_tol
    asymmetry = operator_norm(arr - adjoint(arr))
    if asymmetry > tol * scale(arr):
        raise NotHermitian(f"||M - M*|| = {asymmetry:.3e} exceeds tolerance", asymmetry=asymmetry)
    values, vectors = linalg.eigh(0.5 * (arr + adjoint(arr)))
    return EigenDecomposition(values=values, vectors=vectors)


def hermitian_function(m, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """V fn(Λ) V* for Hermitian M = V Λ V*."""
    eig = hermitian_eig(m)
    return (eig.vectors * fn(eig.values)) @ adjoint(eig.vectors)


def svd(m) -> SvdResult:
    arr = as_matrix(m)
    u, s, vh = linalg.svd(arr, full_matrices=False)
    return SvdResult(singular_values=s, left=u, right=adjoint(vh))


def singular_values(m) -> np.ndarray:
    return linalg.svdvals(as_matrix(m))


def operator_norm(m) -> float:
    return float(singular_values(m)[0])


def spectral_radius(m) -> float:
    arr = _square(m)
    return float(np.max(np.abs(linalg.eigvals(arr))))


def rank(m, rank_tol: float | None = None) -> int:
    tol = settings.RANK_TOL if rank_tol is None else rank_tol
    s = singular_values(m)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def pseudoinverse(m, rank_tol: float | None = None) -> np.ndarray:
    """Moore-Penrose inverse; singular values below rank_tol * sigma_max count as zero."""
    tol = settings.RANK_TOL if rank_tol is None else rank_tol
    if tol <= 0:
        raise ValueError("rank_tol must be positive")
    arr = as_matrix(m)
    u, s, vh = linalg.svd(arr, full_matrices=False)
    cutoff = tol * (s[0] if s.size else 0.0)
    large = s > cutoff
    inv_s = np.zeros_like(s)
    inv_s[large] = 1.0 / s[large]
    return (adjoint(vh) * inv_s) @ adjoint(u)


def matrix_power(m, n: int) -> np.ndarray:
    if n < 0:
        raise ValueError(f"power must be nonnegative, got {n}")
    # numpy powers by repeated squaring
    return np.linalg.matrix_power(_square(m), n)


def try_inverse(m, cond_tol: float | None = None) -> np.ndarray:
    tol = settings.COND_TOL if cond_tol is None else cond_tol
    arr = _square(m)
    s = singular_values(arr)
    sigma_max, sigma_min = float(s[0]), float(s[-1])
    if sigma_max == 0.0 or sigma_min / sigma_max <= 1.0 / tol:
        logger.debug("not invertible: sigma_min=%.3e sigma_max=%.3e", sigma_min, sigma_max)
        raise NotInvertible(f"sigma_min/sigma_max below 1/{tol:.0e}", sigma_min=sigma_min)
    return linalg.inv(arr)


def is_invertible(m, cond_tol: float | None = None) -> bool:
    try:
        try_inverse(m, cond_tol)
    except NotInvertible:
        return False
    return True
