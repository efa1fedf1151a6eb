"""Operator orbits {T^k phi}, operator representation f_{k+1} = T f_k, the
iterated families T^n(F), ball sets B(f, k) and the invertibility
neighborhood of an operator.

Infinite-sequence claims are evaluated at a finite truncation N together with
an explicit tail estimate; verdicts are tri-state (in_V / not_in_V /
undecidable).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np
from scipy import linalg

from ..config import settings
from ..exceptions import (
    DimensionMismatch,
    NotInvertible,
    PreconditionFailed,
    TooFewVectors,
)
from ..models.base import FrameKitModel
from ..models.models import FrameBounds, OperatorSpec, OrbitConfig, VectorFamily
from ..models.schemas import (
    BallMembership,
    InclusionCheck,
    IteratedOperators,
    KernelShiftReport,
    NeighborhoodCertificate,
    OrbitReport,
    RepresentationReport,
    RieszVerdict,
    SeedVerdict,
    VSetExperimentReport,
)
from . import frame_service as frames
from . import numeric_core as nc

logger = logging.getLogger(__name__)

# orbits whose vectors grow past this norm are treated as diverging
_GROWTH_CEILING = 1e100


# ---------------------------------------------------------------------------
# operator representation
# ---------------------------------------------------------------------------

def kernel_shift_invariance(F: VectorFamily, tol: float | None = None) -> KernelShiftReport:
    """Truncated test that ker(U_F) is invariant under the right shift.

    Only kernel vectors with c_N = 0 are tested: for them the shift
    (0, c_1, ..., c_{N-1}) loses nothing past index N.
    """
    tol = settings.PREDICATE_TOL if tol is None else tol
    if F.count < 2:
        raise TooFewVectors("kernel shift test needs at least two vectors")
    u = frames.synthesis_matrix(F)
    kernel = linalg.null_space(u, rcond=settings.RANK_TOL)
    if kernel.shape[1] == 0:
        return KernelShiftReport(invariant=True, residual=0.0, kernel_dimension=0, tested_dimension=0)

    last = np.where(np.abs(kernel[-1, :]) <= settings.RANK_TOL, 0.0, kernel[-1, :])
    if np.all(last == 0):
        coefficients = np.eye(kernel.shape[1])
    else:
        coefficients = linalg.null_space(last[None, :])
    tested = kernel @ coefficients

    worst_residual, witness = 0.0, None
    for c in tested.T:
        # normalize so the largest entry is 1
        c = c / c[np.argmax(np.abs(c))]
        shifted = np.concatenate([[0.0], c[:-1]])
        residual = float(np.linalg.norm(u @ shifted))
        if residual > worst_residual:
            worst_residual, witness = residual, c

    invariant = worst_residual <= tol * nc.scale(u)
    logger.debug("kernel dim %d, tested %d, worst residual %.3e", kernel.shape[1], tested.shape[1], worst_residual)
    return KernelShiftReport(
        invariant=invariant,
        residual=worst_residual,
        witness=None if invariant else witness,
        kernel_dimension=kernel.shape[1],
        tested_dimension=tested.shape[1],
    )


def build_representation(F: VectorFamily, tol: float | None = None) -> RepresentationReport:
    """Minimal-Frobenius-norm T with T [f_1 .. f_{N-1}] = [f_2 .. f_N]."""
    tol = settings.PREDICATE_TOL if tol is None else tol
    if F.count < 2:
        raise TooFewVectors("a representation needs at least two vectors")
    u = frames.synthesis_matrix(F)
    x, y = u[:, :-1], u[:, 1:]
    t = y @ nc.pseudoinverse(x)
    max_residual = float(np.max(np.linalg.norm(t @ x - y, axis=0)))
    exact = max_residual <= tol * max(1.0, float(np.max(np.linalg.norm(u, axis=0))))
    linearly_independent = nc.rank(x) == min(F.count - 1, F.dim)
    kernel = kernel_shift_invariance(F, tol)

    logger.info("representation: residual %.3e, exact=%s", max_residual, exact)
    return RepresentationReport(
        operator=t if exact else None,
        least_squares_operator=t,
        max_residual=max_residual,
        exact=exact,
        linearly_independent=linearly_independent,
        kernel_shift_invariant=kernel.invariant,
        kernel_shift=kernel,
    )


# ---------------------------------------------------------------------------
# orbits and V(T)
# ---------------------------------------------------------------------------

class OrbitTruncation(FrameKitModel):
    family: VectorFamily
    truncation_used: int
    tail_bound: float
    converged: bool


def _orbit_vectors(t: np.ndarray, seed: np.ndarray, count: int) -> np.ndarray:
    """Rows phi, T phi, ..., stopping early if the orbit blows up."""
    out = np.zeros((count, seed.shape[0]), dtype=np.result_type(t, seed))
    v = seed
    for k in range(count):
        out[k] = v
        if np.linalg.norm(v) > _GROWTH_CEILING:
            return out[: k + 1]
        v = t @ v
    return out


def _tail_estimates(norms: np.ndarray, n_max: int) -> np.ndarray:
    """Estimate of sum_{k >= N} ||T^k phi||^2 for N = 0..n_max.

    Exact partial sum over N..2N plus geometric extrapolation from the
    observed per-step ratio (||T^{2N} phi|| / ||T^N phi||)^(1/N).
    """
    squares = norms ** 2
    csum = np.concatenate([[0.0], np.cumsum(squares)])
    tails = np.full(n_max + 1, np.inf)
    for n in range(1, n_max + 1):
        if 2 * n >= norms.shape[0]:
            break
        if norms[n] == 0.0:
            tails[n] = 0.0
            continue
        q = norms[2 * n] / norms[n]
        if q >= 1.0:
            continue
        r2 = q ** (2.0 / n)
        tails[n] = csum[2 * n + 1] - csum[n] + squares[2 * n] * r2 / (1.0 - r2)
    return tails


def truncate_orbit(config: OrbitConfig) -> OrbitTruncation:
    d, n_max = config.operator.dim, config.max_length
    vectors = _orbit_vectors(config.operator.matrix, config.seed, 2 * n_max + 1)
    tails = _tail_estimates(np.linalg.norm(vectors, axis=1), n_max)

    length, converged = n_max, False
    for n in range(d, n_max + 1):
        if tails[n] < config.tail_tol:
            length, converged = n, True
            break
    length = min(length, vectors.shape[0])
    if not converged:
        logger.warning("orbit tail did not fall below %.1e within %d terms", config.tail_tol, n_max)
    return OrbitTruncation(
        family=VectorFamily(vectors=vectors[:length]),
        truncation_used=length,
        tail_bound=float(tails[length]),
        converged=converged,
    )


def orbit(config: OrbitConfig) -> VectorFamily:
    """{phi, T phi, ..., T^{N-1} phi} at the smallest admissible truncation N."""
    return truncate_orbit(config).family


def orbit_spans(F: VectorFamily, rank_tol: float | None = None) -> bool:
    """Whether an orbit family spans its space.

    The span of {T^k phi} stops growing after d steps, so the first d vectors
    decide, each scaled to unit length.
    """
    cols = frames.synthesis_matrix(F)[:, : F.dim]
    norms = np.linalg.norm(cols, axis=0)
    cols = cols[:, norms > 0] / norms[norms > 0]
    return cols.shape[1] == F.dim and nc.rank(cols, rank_tol) == F.dim


def orbit_frame_report(config: OrbitConfig, rank_tol: float | None = None) -> OrbitReport:
    trunc = truncate_orbit(config)
    lam_min, lam_max = frames.extreme_eigenvalues(trunc.family)
    spans = orbit_spans(trunc.family, rank_tol)
    tail = trunc.tail_bound

    bounds, upper_estimate, reason = None, None, None
    if spans and lam_min > 0:
        bounds = FrameBounds(lower=lam_min, upper=lam_max)
        if np.isfinite(tail):
            upper_estimate = lam_max + tail

    if not spans:
        verdict, reason = "not_in_V", "rank"
    elif not np.isfinite(tail):
        verdict, reason = "undecidable", "diverging_bessel"
    elif lam_min <= max(config.tail_tol, tail):
        verdict, reason = "undecidable", "tail_dominates"
    else:
        verdict = "in_V"

    logger.info(
        "orbit N=%d lambda_min=%.6g tail=%.3e -> %s%s",
        trunc.truncation_used, lam_min, tail, verdict, f" ({reason})" if reason else "",
    )
    return OrbitReport(
        truncation_used=trunc.truncation_used,
        converged=trunc.converged,
        bounds_estimate=bounds,
        lambda_min=lam_min,
        tail_bound=tail,
        upper_bound_estimate=upper_estimate,
        in_V=verdict == "in_V",
        verdict=verdict,
        reason=reason,
    )


def orbit_shift_discrepancy(F: VectorFamily, T, n: int) -> float:
    """max_k ||T^n f_k - f_{k+n}|| over an orbit family; zero for exact orbits."""
    t = OperatorSpec.of(T)
    if n >= F.count:
        raise TooFewVectors(f"shift {n} leaves no vectors of a family of {F.count}")
    cols = frames.synthesis_matrix(F)
    moved = nc.matrix_power(t.matrix, n) @ cols[:, : F.count - n]
    return float(np.max(np.linalg.norm(moved - cols[:, n:], axis=0)))


def find_orbit_frame_seed(
    T,
    rng: np.random.Generator,
    attempts: int | None = None,
    n_max: int | None = None,
    tail_tol: float | None = None,
) -> tuple[bool, Optional[np.ndarray]]:
    """E(H) membership at truncation: look for a random seed whose orbit is in V(T)."""
    t = OperatorSpec.of(T)
    attempts = settings.E_SEARCH_ATTEMPTS if attempts is None else attempts
    complex_operator = np.iscomplexobj(t.matrix)
    for _ in range(attempts):
        seed = rng.standard_normal(t.dim)
        if complex_operator:
            seed = seed + 1j * rng.standard_normal(t.dim)
        config = OrbitConfig(
            operator=t,
            seed=seed,
            max_length=max(t.dim, n_max or settings.N_MAX),
            tail_tol=tail_tol or settings.TAIL_TOL,
        )
        if orbit_frame_report(config).in_V:
            return True, seed
    return False, None


# ---------------------------------------------------------------------------
# iterated families T^n(F)
# ---------------------------------------------------------------------------

def _iterate(t: np.ndarray, v: np.ndarray, n: int) -> np.ndarray:
    for _ in range(n):
        v = t @ v
    return v


def _relative(a: np.ndarray, b: np.ndarray, ref: float) -> float:
    return nc.operator_norm(a - b) / max(1.0, ref)


def iterated_family_operators(
    F: VectorFamily, T, n: int, tol: float | None = None
) -> IteratedOperators:
    """Synthesis, analysis and frame operators of T^n(F), computed from the
    moved vectors and from the closed forms T^n U_F, U_F^* T^n*, T^n S_F T^n*."""
    tol = settings.DECOMPOSITION_TOL if tol is None else tol
    t = OperatorSpec.of(T)
    if t.dim != F.dim:
        raise DimensionMismatch(f"operator acts on dimension {t.dim}, family lives in {F.dim}")
    if n < 1:
        raise PreconditionFailed(f"n must be a positive integer, got {n}")

    moved = np.array([_iterate(t.matrix, f, n) for f in F.vectors])
    direct_u = moved.T
    direct_a = np.conj(moved)
    direct_s = sum(np.outer(v, np.conj(v)) for v in moved)

    tn = nc.matrix_power(t.matrix, n)
    u = frames.synthesis_matrix(F)
    closed_u = tn @ u
    closed_a = nc.adjoint(u) @ nc.adjoint(tn)
    closed_s = tn @ frames.frame_operator(F) @ nc.adjoint(tn)
    chain = tn @ u @ nc.adjoint(u) @ nc.adjoint(tn)

    ref = nc.operator_norm(tn) * nc.operator_norm(u)
    report = dict(
        synthesis_discrepancy=_relative(direct_u, closed_u, ref),
        analysis_discrepancy=_relative(direct_a, closed_a, ref),
        frame_operator_discrepancy=_relative(direct_s, closed_s, ref ** 2),
        factorization_discrepancy=_relative(closed_s, chain, ref ** 2),
    )
    agree = max(report.values()) <= tol
    if not agree:
        logger.warning("T^n(F) operator identities disagree: %s", report)
    return IteratedOperators(
        n=n,
        synthesis=direct_u,
        analysis=direct_a,
        frame_operator=direct_s,
        agree=agree,
        **report,
    )


def riesz_iff_invertible(F: VectorFamily, T, n: int, tol: float | None = None) -> RieszVerdict:
    """For a Riesz basis F: T^n(F) is a Riesz basis iff T^n is invertible."""
    tol = settings.PREDICATE_TOL if tol is None else tol
    t = OperatorSpec.of(T)
    if t.dim != F.dim:
        raise DimensionMismatch(f"operator acts on dimension {t.dim}, family lives in {F.dim}")
    if not frames.is_riesz_basis(F, tol):
        raise PreconditionFailed("F is not a Riesz basis")

    tn = nc.matrix_power(t.matrix, n)
    riesz = frames.is_riesz_basis(F.transformed(tn), tol)
    invertible = nc.is_invertible(tn, cond_tol=1.0 / tol)
    holds = riesz == invertible
    if not holds:
        logger.warning("Riesz/invertibility disagreement at n=%d: riesz=%s invertible=%s", n, riesz, invertible)
    return RieszVerdict(
        riesz_basis=riesz,
        invertible=invertible,
        sigma_min=float(nc.singular_values(tn)[-1]),
        holds=holds,
    )


# ---------------------------------------------------------------------------
# ball sets B(f, k)
# ---------------------------------------------------------------------------

def ball_membership(phi, f, k: float, T, n_max: int | None = None) -> BallMembership:
    """Is ||T^n phi - f|| < 1/k for some 0 <= n <= n_max?"""
    if k < 1:
        raise PreconditionFailed(f"k must be at least 1, got {k}")
    n_max = settings.N_MAX if n_max is None else n_max
    t = OperatorSpec.of(T)
    f = np.ravel(np.asarray(f))
    v = np.ravel(np.asarray(phi))
    radius = 1.0 / k
    best = np.inf
    for n in range(n_max + 1):
        distance = float(np.linalg.norm(v - f))
        best = min(best, distance)
        if distance < radius:
            return BallMembership(
                member=True, witness_n=n, min_distance=best, radius=radius,
                searched_up_to=n, bounded_search=False,
            )
        v = t.matrix @ v
    return BallMembership(
        member=False, min_distance=best, radius=radius, searched_up_to=n_max, bounded_search=True,
    )


def vset_ball_experiment(
    T,
    seeds: Sequence,
    ks: Sequence[int],
    n_max: int | None = None,
    tail_tol: float | None = None,
    max_workers: int | None = None,
) -> VSetExperimentReport:
    """Classify seeds by their orbits, then check that every in-V seed lies in
    B(f, k) for every other in-V seed f and every k."""
    t = OperatorSpec.of(T)
    n_max = settings.N_MAX if n_max is None else n_max
    tail_tol = settings.TAIL_TOL if tail_tol is None else tail_tol
    seeds = [np.ravel(np.asarray(s)) for s in seeds]

    verdicts = []
    for i, seed in enumerate(seeds):
        report = orbit_frame_report(
            OrbitConfig(operator=t, seed=seed, max_length=max(n_max, t.dim), tail_tol=tail_tol)
        )
        verdicts.append(
            SeedVerdict(index=i, in_V=report.in_V, verdict=report.verdict, reason=report.reason, A=report.A)
        )

    members = [v.index for v in verdicts if v.in_V]
    triples = [(i, j, k) for i in members for j in members if i != j for k in ks]

    def check(triple):
        i, j, k = triple
        return InclusionCheck(
            seed_index=i, center_index=j, k=k,
            membership=ball_membership(seeds[i], seeds[j], k, t, n_max),
        )

    # map keeps input order
    with ThreadPoolExecutor(max_workers=max_workers or settings.MAX_WORKERS) as pool:
        checks = list(pool.map(check, triples))

    violations = [c for c in checks if not c.membership.member]
    for c in violations:
        logger.info(
            "seed %d not found in B(seed %d, %d): min distance %.6g",
            c.seed_index, c.center_index, c.k, c.membership.min_distance,
        )
    return VSetExperimentReport(
        n_max=n_max,
        ks=list(ks),
        seeds=verdicts,
        checks=len(checks),
        violations=violations,
        vacuous=not triples,
    )


# ---------------------------------------------------------------------------
# invertibility neighborhood
# ---------------------------------------------------------------------------

def invertibility_neighborhood(T, cond_tol: float | None = None) -> float:
    """r = 1/||T^{-1}||: every U with ||T - U|| < r is invertible."""
    t = OperatorSpec.of(T)
    return 1.0 / nc.operator_norm(nc.try_inverse(t.matrix, cond_tol))


def neighborhood_certificate(T, U) -> NeighborhoodCertificate:
    """r(T^{-1}(T - U)) < 1 certifies U = T(I - T^{-1}(T - U)) invertible."""
    t, u = OperatorSpec.of(T), OperatorSpec.of(U)
    if t.dim != u.dim:
        raise DimensionMismatch(f"operators act on dimensions {t.dim} and {u.dim}")
    inverse = nc.try_inverse(t.matrix)
    difference = t.matrix - u.matrix
    radius = 1.0 / nc.operator_norm(inverse)
    distance = nc.operator_norm(difference)
    return NeighborhoodCertificate(
        radius=radius,
        distance=distance,
        inside=distance < radius,
        certificate=nc.spectral_radius(inverse @ difference),
        perturbed_invertible=nc.is_invertible(u.matrix),
    )


def sample_neighborhood(
    T, rng: np.random.Generator, samples: int, fraction: float = 0.99
) -> list[NeighborhoodCertificate]:
    """Random perturbations with ||Delta|| = fraction * radius."""
    t = OperatorSpec.of(T)
    radius = invertibility_neighborhood(t)
    certificates = []
    for _ in range(samples):
        delta = rng.standard_normal((t.dim, t.dim))
        if np.iscomplexobj(t.matrix):
            delta = delta + 1j * rng.standard_normal((t.dim, t.dim))
        delta *= fraction * radius / nc.operator_norm(delta)
        certificates.append(neighborhood_certificate(t, t.matrix + delta))
    return certificates


def safe_neighborhood_radius(T) -> Optional[float]:
    try:
        return invertibility_neighborhood(T)
    except NotInvertible:
        return None

