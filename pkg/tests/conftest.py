import json
from pathlib import Path

import numpy as np
import pytest

from app.models.models import VectorFamily

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

SQRT3_2 = np.sqrt(3.0) / 2.0


def family(*vectors) -> VectorFamily:
    return VectorFamily.from_vectors([np.asarray(v, dtype=float) for v in vectors])


def random_frame(rng: np.random.Generator, d: int, n: int, complex_: bool = False) -> VectorFamily:
    """Gaussian families span with probability one once n >= d."""
    vectors = rng.standard_normal((n, d))
    if complex_:
        vectors = vectors + 1j * rng.standard_normal((n, d))
    return VectorFamily(vectors=vectors)


def load_golden(name: str) -> dict:
    return json.loads((GOLDEN / name).read_text(encoding="utf-8"))


def assert_matches(actual, expected, tol=1e-9, path="$"):
    """Every key of expected appears in actual; numbers compared within tol."""
    if isinstance(expected, dict):
        assert isinstance(actual, dict), f"{path}: expected an object, got {actual!r}"
        for key, value in expected.items():
            assert key in actual, f"{path}.{key} missing"
            assert_matches(actual[key], value, tol, f"{path}.{key}")
    elif isinstance(expected, list):
        assert isinstance(actual, list) and len(actual) == len(expected), f"{path}: {actual!r} != {expected!r}"
        for i, (a, e) in enumerate(zip(actual, expected)):
            assert_matches(a, e, tol, f"{path}[{i}]")
    elif isinstance(expected, bool) or expected is None or isinstance(expected, str):
        assert actual == expected, f"{path}: {actual!r} != {expected!r}"
    else:
        assert abs(actual - expected) <= tol, f"{path}: {actual!r} != {expected!r}"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def standard_basis():
    return family([1, 0], [0, 1])


@pytest.fixture
def e1e1e2():
    return family([1, 0], [1, 0], [0, 1])


@pytest.fixture
def mercedes_benz():
    return family([0, 1], [-SQRT3_2, -0.5], [SQRT3_2, -0.5])
