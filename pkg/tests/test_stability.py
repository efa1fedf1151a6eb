import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.exceptions import BaseNotAFrame, DimensionMismatch
from app.services import numeric_core as nc
from app.services import stability_service as stability
from conftest import family

DIAG = np.diag([0.9, 0.5])


def _truncated_bounds(t, f, n):
    vectors = [np.asarray(f, dtype=float)]
    for _ in range(n):
        vectors.append(t @ vectors[-1])
    u = np.column_stack(vectors)
    return np.linalg.eigvalsh(u @ u.T)[[0, -1]]


# mu

def test_mu_of_the_zero_operator_keeps_the_first_term():
    assert stability.perturbation_mu(np.zeros((2, 2)), 3, 5) == pytest.approx(1 / 3)


def test_mu_of_a_unit_norm_operator():
    assert stability.perturbation_mu(np.eye(2), 2, 3) == pytest.approx(1.0)


def test_mu_geometric_sum():
    expected = 0.5 * math.sqrt((1 - 0.81 ** 11) / 0.19)
    assert stability.perturbation_mu(DIAG, 2, 10) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(1.0891, abs=1e-4)


def test_mu_is_monotone(rng):
    t = rng.standard_normal((3, 3))
    values = [stability.perturbation_mu(t, 2, n) for n in range(8)]
    assert all(a <= b for a, b in zip(values, values[1:]))
    assert stability.perturbation_mu(t, 4, 5) < stability.perturbation_mu(t, 2, 5)


def test_mu_accepts_real_k():
    assert stability.perturbation_mu(np.zeros((1, 1)), 0.5, 2) == pytest.approx(2.0)


@pytest.mark.parametrize("k", [0, -1.0])
def test_mu_rejects_nonpositive_k(k):
    with pytest.raises(ValueError):
        stability.perturbation_mu(DIAG, k, 3)


# bessel difference

def test_bessel_difference_of_equal_families(e1e1e2):
    assert stability.bessel_difference_bound(e1e1e2, e1e1e2) == pytest.approx(0.0)


def test_bessel_difference_of_one_shifted_vector(e1e1e2):
    shifted = family([1, 0], [1.3, -0.4], [0, 1])
    assert stability.bessel_difference_bound(e1e1e2, shifted) == pytest.approx(0.5)


def test_bessel_difference_shape_mismatch(e1e1e2, standard_basis):
    with pytest.raises(DimensionMismatch):
        stability.bessel_difference_bound(e1e1e2, standard_basis)


# stability_test

def test_zero_perturbation():
    report = stability.stability_test(DIAG, [1.0, 1.0], [1.0, 1.0], 10)
    assert report.mu == 0.0
    assert report.sufficient
    assert math.isinf(report.k)
    assert report.certified_lower_bound == pytest.approx(report.lower_bound_A)
    assert report.oracle_bounds.lower == pytest.approx(report.lower_bound_A)
    assert report.oracle_bounds.upper == pytest.approx(report.upper_bound_B)
    assert report.bessel_difference == 0.0


def test_small_perturbation_is_certified():
    a, b = _truncated_bounds(DIAG, [1.0, 1.0], 10)
    mu = 0.25 * math.sqrt((1 - 0.81 ** 11) / 0.19)
    report = stability.stability_test(DIAG, [1.0, 1.0], [1.25, 1.0], 10)

    assert report.lower_bound_A == pytest.approx(a, rel=1e-10)
    assert report.upper_bound_B == pytest.approx(b, rel=1e-10)
    assert report.k == pytest.approx(4.0)
    assert report.mu == pytest.approx(mu, rel=1e-12)
    assert report.sufficient
    assert report.certified_lower_bound == pytest.approx((math.sqrt(a) - mu) ** 2, rel=1e-9)
    assert report.certified_upper_bound == pytest.approx((math.sqrt(b) + mu) ** 2, rel=1e-9)
    assert report.oracle_bounds.lower >= report.certified_lower_bound
    assert report.oracle_bounds.upper <= report.certified_upper_bound
    assert report.bessel_difference <= report.mu + 1e-10


def test_half_unit_perturbation_is_inconclusive():
    # the truncated orbit frame operator is not diagonal, so sqrt(A) is about 0.739, not 1.15
    a, _ = _truncated_bounds(DIAG, [1.0, 1.0], 10)
    report = stability.stability_test(DIAG, [1.0, 1.0], [1.5, 1.0], 10)
    assert math.sqrt(a) == pytest.approx(0.7391, abs=1e-3)
    assert report.mu == pytest.approx(1.0891, abs=1e-4)
    assert not report.sufficient
    assert report.certified_lower_bound is None
    assert report.certified_upper_bound is None


def test_large_perturbation_still_reports_the_oracle():
    report = stability.stability_test(DIAG, [1.0, 1.0], [3.0, 1.0], 10)
    assert report.k == pytest.approx(0.5)
    assert report.mu == pytest.approx(2 * math.sqrt((1 - 0.81 ** 11) / 0.19))
    assert not report.sufficient
    assert report.oracle_bounds is not None


def test_base_orbit_must_be_a_frame():
    with pytest.raises(BaseNotAFrame) as err:
        stability.stability_test(DIAG, [1.0, 0.0], [1.0, 0.1], 10)
    assert err.value.exit_code == 3


def test_seed_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        stability.stability_test(DIAG, [1.0, 1.0, 1.0], [1.0, 1.0], 4)


def test_stability_soundness(rng):
    passes = 0
    while passes < 500:
        d = int(rng.integers(1, 5))
        t = rng.standard_normal((d, d))
        t *= rng.uniform(0.3, 1.2) / nc.operator_norm(t)
        n = int(rng.integers(d, 65))
        f = rng.standard_normal(d)
        a, b = _truncated_bounds(t, f, n)
        if a <= 1e-6 * max(1.0, b):
            continue
        powers = nc.operator_norm(t) ** (2.0 * np.arange(n + 1))
        radius = rng.uniform(0.05, 0.95) * math.sqrt(a / powers.sum())
        direction = rng.standard_normal(d)
        phi = f + radius * direction / np.linalg.norm(direction)

        report = stability.stability_test(t, f, phi, n)
        if not report.sufficient:
            continue
        passes += 1
        slack = 1e-8 * max(1.0, report.upper_bound_B)
        assert report.oracle_bounds.lower >= report.certified_lower_bound - slack
        assert report.bessel_difference <= report.mu * (1 + 1e-10) + 1e-10
        assert_allclose(report.k_inverse, radius, rtol=1e-10)
