"""Perturbation of a truncated orbit frame.

For the orbit {T^i f}_{i<=n} with lower bound A and a seed phi at distance
1/k from f, every coefficient sequence satisfies
||sum c_i (T^i f - T^i phi)|| <= mu ||c|| with
mu = (1/k) (sum_{i=0}^n ||T||^{2i})^{1/2}. When mu < sqrt(A) the perturbed
orbit is a frame with bounds ((sqrt(A) - mu)^2, (sqrt(B) + mu)^2).
"""

import logging
import math

import numpy as np

from ..config import settings
from ..exceptions import BaseNotAFrame, DimensionMismatch, NotAFrame
from ..models.base import finite_array
from ..models.models import OperatorSpec, VectorFamily
from ..models.schemas import StabilityReport
from . import frame_service as frames
from . import numeric_core as nc

logger = logging.getLogger(__name__)


def _mu(norm: float, radius: float, n: int) -> float:
    # 0.0 ** 0 == 1.0, so the i = 0 term is always present
    powers = norm ** (2.0 * np.arange(n + 1))
    return float(radius * math.sqrt(float(np.sum(powers))))


def perturbation_mu(T, k: float, n: int) -> float:
    """mu = (1/k) (sum_{i=0}^n ||T||^{2i})^{1/2}; k may be any positive real."""
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    return _mu(nc.operator_norm(OperatorSpec.of(T).matrix), 1.0 / k, n)


def bessel_difference_bound(F: VectorFamily, G: VectorFamily) -> float:
    """Smallest C with ||sum c_i (f_i - g_i)|| <= C ||c||, i.e. ||U_F - U_G||."""
    if F.vectors.shape != G.vectors.shape:
        raise DimensionMismatch(
            f"families have shapes {F.vectors.shape} and {G.vectors.shape}"
        )
    return nc.operator_norm(frames.synthesis_matrix(F) - frames.synthesis_matrix(G))


def _seed(value, t: OperatorSpec) -> np.ndarray:
    seed = finite_array(np.ravel(np.asarray(value)), ndim=1)
    if seed.shape[0] != t.dim:
        raise DimensionMismatch(f"seed has length {seed.shape[0]}, operator acts on dimension {t.dim}")
    return seed


def _truncated_orbit(t: OperatorSpec, seed: np.ndarray, n: int) -> VectorFamily:
    vectors = [seed]
    for _ in range(n):
        vectors.append(t.matrix @ vectors[-1])
    return VectorFamily.from_vectors(vectors)


def stability_test(T, f, phi, n: int, tol: float | None = None) -> StabilityReport:
    """Check mu < sqrt(A) for the seeds f (base) and phi (perturbed) at truncation n."""
    tol = settings.STRICT_TOL if tol is None else tol
    t = OperatorSpec.of(T)
    f, phi = _seed(f, t), _seed(phi, t)

    base = _truncated_orbit(t, f, n)
    perturbed = _truncated_orbit(t, phi, n)
    try:
        base_bounds = frames.frame_bounds(base)
    except NotAFrame as e:
        raise BaseNotAFrame(
            f"orbit of the base seed truncated at n={n} is not a frame", lambda_min=e.lambda_min
        ) from e

    radius = float(np.linalg.norm(f - phi))
    mu = _mu(nc.operator_norm(t.matrix), radius, n)
    sqrt_a = math.sqrt(base_bounds.lower)
    sufficient = mu < sqrt_a - tol

    try:
        oracle = frames.frame_bounds(perturbed)
        oracle_lambda_min = oracle.lower
    except NotAFrame as e:
        oracle, oracle_lambda_min = None, e.lambda_min

    logger.info(
        "stability n=%d: mu=%.6g sqrt(A)=%.6g -> %s", n, mu, sqrt_a, "sufficient" if sufficient else "inconclusive"
    )
    return StabilityReport(
        n=n,
        lower_bound_A=base_bounds.lower,
        upper_bound_B=base_bounds.upper,
        k_inverse=radius,
        k=1.0 / radius if radius > 0 else math.inf,
        mu=mu,
        sufficient=sufficient,
        certified_lower_bound=(sqrt_a - mu) ** 2 if sufficient else None,
        certified_upper_bound=(math.sqrt(base_bounds.upper) + mu) ** 2 if sufficient else None,
        bessel_difference=bessel_difference_bound(base, perturbed),
        oracle_bounds=oracle,
        oracle_lambda_min=oracle_lambda_min,
    )
