"""Synthesis, analysis and frame operators of finite families, optimal frame
bounds, duals and the Parseval transform.

Inner products are conjugate-linear in the second argument: <f, f_k> = f_k^* f.
"""

import logging

import numpy as np

from ..config import settings
from ..exceptions import NotAFrame, PreconditionFailed
from ..models.models import FrameBounds, VectorFamily
from . import numeric_core as nc

logger = logging.getLogger(__name__)


def synthesis_matrix(F: VectorFamily) -> np.ndarray:
    """d x N matrix whose column k is f_k."""
    return F.columns


def analysis_matrix(F: VectorFamily) -> np.ndarray:
    return nc.adjoint(synthesis_matrix(F))


def frame_operator(F: VectorFamily) -> np.ndarray:
    u = synthesis_matrix(F)
    return u @ nc.adjoint(u)


def _spectrum(F: VectorFamily):
    eig = nc.hermitian_eig(frame_operator(F))
    lam_min, lam_max = float(eig.values[0]), float(eig.values[-1])
    return eig, lam_min, lam_max


def _check_frame(lam_min: float, lam_max: float, rank_tol: float | None) -> None:
    tol = settings.RANK_TOL if rank_tol is None else rank_tol
    if lam_min <= tol * max(1.0, lam_max):
        raise NotAFrame(f"family does not span: lambda_min(S) = {lam_min:.3e}", lambda_min=lam_min)


def frame_bounds(F: VectorFamily, rank_tol: float | None = None) -> FrameBounds:
    """Optimal bounds (lambda_min(S_F), lambda_max(S_F)); NotAFrame when F does not span."""
    _, lam_min, lam_max = _spectrum(F)
    _check_frame(lam_min, lam_max, rank_tol)
    logger.debug("frame bounds A=%.6g B=%.6g (d=%d, N=%d)", lam_min, lam_max, F.dim, F.count)
    return FrameBounds(lower=lam_min, upper=lam_max)


def bound_witnesses(F: VectorFamily) -> tuple[np.ndarray, np.ndarray]:
    """Unit eigenvectors of S_F attaining A and B."""
    eig, _, _ = _spectrum(F)
    return eig.vectors[:, 0], eig.vectors[:, -1]


def extreme_eigenvalues(F: VectorFamily) -> tuple[float, float]:
    """(lambda_min, lambda_max) of S_F, without the spanning check."""
    _, lam_min, lam_max = _spectrum(F)
    return lam_min, lam_max


def bessel_bound(F: VectorFamily) -> float:
    """Optimal upper bound; every finite family is Bessel."""
    return extreme_eigenvalues(F)[1]


def is_tight(F: VectorFamily, tol: float | None = None) -> bool:
    tol = settings.PREDICATE_TOL if tol is None else tol
    bounds = frame_bounds(F)
    return (bounds.upper - bounds.lower) / bounds.upper <= tol


def is_parseval(F: VectorFamily, tol: float | None = None) -> bool:
    tol = settings.PREDICATE_TOL if tol is None else tol
    bounds = frame_bounds(F)
    return is_tight(F, tol) and abs(bounds.lower - 1.0) <= tol and abs(bounds.upper - 1.0) <= tol


def is_riesz_basis(F: VectorFamily, tol: float | None = None) -> bool:
    """N = d and the synthesis matrix is invertible at tolerance."""
    tol = settings.PREDICATE_TOL if tol is None else tol
    if F.count != F.dim:
        return False
    return nc.is_invertible(synthesis_matrix(F), cond_tol=1.0 / tol)


def riesz_bounds(F: VectorFamily, tol: float | None = None) -> FrameBounds:
    """Optimal constants of A sum|c_k|^2 <= ||sum c_k f_k||^2 <= B sum|c_k|^2."""
    if not is_riesz_basis(F, tol):
        raise PreconditionFailed("family is not a Riesz basis")
    s = nc.singular_values(synthesis_matrix(F))
    return FrameBounds(lower=float(s[-1] ** 2), upper=float(s[0] ** 2))


def _frame_operator_function(F: VectorFamily, fn) -> np.ndarray:
    frame_bounds(F)
    return nc.hermitian_function(frame_operator(F), fn)


def inverse_frame_operator(F: VectorFamily) -> np.ndarray:
    return _frame_operator_function(F, lambda lam: 1.0 / lam)


def inverse_sqrt_frame_operator(F: VectorFamily) -> np.ndarray:
    """S_F^{-1/2} from the eigendecomposition of S_F."""
    return _frame_operator_function(F, lambda lam: 1.0 / np.sqrt(lam))


def canonical_dual(F: VectorFamily) -> VectorFamily:
    return F.transformed(inverse_frame_operator(F))


def parseval_transform(F: VectorFamily) -> VectorFamily:
    return F.transformed(inverse_sqrt_frame_operator(F))


def reconstruct(F: VectorFamily, f) -> np.ndarray:
    """sum_k <f, S^{-1} f_k> f_k, which returns f for any frame."""
    dual = canonical_dual(F)
    coefficients = analysis_matrix(dual) @ np.asarray(f)
    return synthesis_matrix(F) @ coefficients
