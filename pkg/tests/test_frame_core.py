import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from app.exceptions import NotAFrame, PreconditionFailed
from app.models.models import VectorFamily
from app.services import frame_service as frames
from app.services import numeric_core as nc
from conftest import SQRT3_2, family, random_frame


def test_synthesis_matrix_columns(e1e1e2, mercedes_benz):
    assert_allclose(frames.synthesis_matrix(e1e1e2), [[1, 1, 0], [0, 0, 1]])
    assert_allclose(
        frames.synthesis_matrix(mercedes_benz), [[0, -SQRT3_2, SQRT3_2], [1, -0.5, -0.5]]
    )


def test_analysis_coefficients(e1e1e2):
    assert_allclose(frames.analysis_matrix(e1e1e2) @ np.array([3.0, 5.0]), [3.0, 3.0, 5.0])


def test_analysis_is_conjugate_linear_in_the_frame():
    F = VectorFamily.from_vectors([[1j, 0], [0, 1]])
    assert_allclose(frames.analysis_matrix(F) @ np.array([1j, 0]), [1.0, 0.0])


@pytest.mark.parametrize(
    "vectors, expected",
    [
        ([[1, 0], [0, 1]], np.eye(2)),
        ([[1, 0], [1, 0], [0, 1]], np.diag([2.0, 1.0])),
        ([[0, 1], [-SQRT3_2, -0.5], [SQRT3_2, -0.5]], np.diag([1.5, 1.5])),
    ],
)
def test_frame_operator(vectors, expected):
    F = family(*vectors)
    direct = sum(np.outer(f, f) for f in F.vectors)
    assert_allclose(frames.frame_operator(F), direct, atol=1e-14)
    assert_allclose(frames.frame_operator(F), expected, atol=1e-14)


def test_frame_bounds(standard_basis, e1e1e2):
    assert frames.frame_bounds(standard_basis).lower == pytest.approx(1.0)
    bounds = frames.frame_bounds(e1e1e2)
    assert (bounds.lower, bounds.upper) == (pytest.approx(1.0), pytest.approx(2.0))


def test_non_spanning_family_is_not_a_frame():
    with pytest.raises(NotAFrame) as err:
        frames.frame_bounds(family([1, 0]))
    assert err.value.lambda_min == pytest.approx(0.0, abs=1e-12)
    assert err.value.exit_code == 3


def test_bound_witnesses_attain_the_bounds(e1e1e2):
    v_min, v_max = frames.bound_witnesses(e1e1e2)
    s = frames.frame_operator(e1e1e2)
    assert np.vdot(v_min, s @ v_min).real == pytest.approx(1.0)
    assert np.vdot(v_max, s @ v_max).real == pytest.approx(2.0)


def test_every_finite_family_is_bessel():
    assert frames.bessel_bound(family([1, 0])) == pytest.approx(1.0)


def test_tight_and_parseval(standard_basis, e1e1e2, mercedes_benz):
    assert frames.is_tight(mercedes_benz)
    assert not frames.is_parseval(mercedes_benz)
    assert frames.is_parseval(standard_basis)
    assert not frames.is_tight(e1e1e2)


def test_riesz_basis(standard_basis, e1e1e2):
    assert frames.is_riesz_basis(standard_basis)
    assert not frames.is_riesz_basis(e1e1e2)
    assert not frames.is_riesz_basis(family([1, 0], [1, 0]))


def test_riesz_bounds_require_a_basis(e1e1e2):
    with pytest.raises(PreconditionFailed):
        frames.riesz_bounds(e1e1e2)


@settings(deadline=None, max_examples=30)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 5))
def test_riesz_bounds_coincide_with_frame_bounds(seed, d):
    F = random_frame(np.random.default_rng(seed), d, d)
    riesz, bounds = frames.riesz_bounds(F), frames.frame_bounds(F)
    assert riesz.lower == pytest.approx(bounds.lower, abs=1e-10 * bounds.upper)
    assert riesz.upper == pytest.approx(bounds.upper, rel=1e-8)


def test_canonical_dual(standard_basis, e1e1e2, mercedes_benz):
    assert_allclose(frames.canonical_dual(standard_basis).vectors, standard_basis.vectors)
    assert_allclose(frames.canonical_dual(e1e1e2).vectors, [[0.5, 0], [0.5, 0], [0, 1]], atol=1e-14)
    assert_allclose(frames.canonical_dual(mercedes_benz).vectors, mercedes_benz.vectors / 1.5, atol=1e-14)


def test_inverse_sqrt_frame_operator(e1e1e2):
    assert_allclose(frames.inverse_sqrt_frame_operator(e1e1e2), np.diag([1 / np.sqrt(2), 1.0]), atol=1e-14)


def test_parseval_transform(e1e1e2, mercedes_benz):
    r = 1 / np.sqrt(2)
    assert_allclose(frames.parseval_transform(e1e1e2).vectors, [[r, 0], [r, 0], [0, 1]], atol=1e-14)
    assert_allclose(
        frames.parseval_transform(mercedes_benz).vectors, mercedes_benz.vectors / np.sqrt(1.5), atol=1e-14
    )


def test_parseval_transform_needs_a_frame():
    with pytest.raises(NotAFrame):
        frames.parseval_transform(family([1, 0], [2, 0]))


def test_parseval_suite(rng):
    for _ in range(200):
        d = int(rng.integers(1, 7))
        F = random_frame(rng, d, int(rng.integers(d + 1, 3 * d + 2)), complex_=bool(rng.integers(2)))
        bounds = frames.frame_bounds(frames.parseval_transform(F))
        assert abs(bounds.lower - 1) <= 1e-8 and abs(bounds.upper - 1) <= 1e-8


@settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 5), extra=st.integers(0, 6))
def test_reconstruction_through_the_dual(seed, d, extra):
    rng = np.random.default_rng(seed)
    F = random_frame(rng, d, d + extra, complex_=True)
    f = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    tol = 1e-12 * np.linalg.cond(frames.frame_operator(F)) * max(1.0, np.linalg.norm(f))
    assert_allclose(frames.reconstruct(F, f), f, atol=max(1e-9, tol))


def _random_family(rng, d, n, complex_):
    """Gaussian family, made rank deficient about half the time."""
    F = random_frame(rng, d, n, complex_=complex_)
    if d > 1 and rng.integers(2):
        r = int(rng.integers(1, d))
        basis = random_frame(rng, d, r, complex_=complex_).columns
        coefficients = rng.standard_normal((r, n))
        F = VectorFamily.from_columns(basis @ coefficients)
    return F


def test_frame_predicate_matches_synthesis_rank(rng):
    for _ in range(300):
        d = int(rng.integers(1, 9))
        F = _random_family(rng, d, int(rng.integers(1, 25)), complex_=bool(rng.integers(2)))
        spans = nc.rank(frames.synthesis_matrix(F)) == d
        try:
            frames.frame_bounds(F)
            is_frame = True
        except NotAFrame:
            is_frame = False
        assert is_frame == spans


def test_operators_factor_through_the_synthesis_matrix(rng):
    for _ in range(200):
        d = int(rng.integers(1, 9))
        F = _random_family(rng, d, int(rng.integers(1, 25)), complex_=bool(rng.integers(2)))
        u = frames.synthesis_matrix(F)
        assert u.shape == (d, F.count)
        assert_allclose(frames.analysis_matrix(F), u.conj().T, rtol=0, atol=0)
        assert_allclose(frames.frame_operator(F), u @ u.conj().T, rtol=1e-12, atol=1e-12)
