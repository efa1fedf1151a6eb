"""MatrixFile parsing/writing and the canonical JSON form of every report.

Canonical JSON: sorted keys, two-space indent, floats with 17 significant
digits, non-finite floats as the strings "inf", "-inf" and "nan". Matrices
are written as MatrixFile objects, vectors as flat lists, complex scalars as
[re, im] pairs.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ValidationError

from ..exceptions import MatrixFileError
from ..models.base import array_payload
from ..models.schemas import MatrixFile

logger = logging.getLogger(__name__)


def _reject_constant(name: str):
    raise MatrixFileError(f"non-finite literal {name} is not admitted")


def _scalar(entry, is_complex: bool) -> complex:
    if is_complex:
        if isinstance(entry, (int, float)) and not isinstance(entry, bool):
            return complex(entry, 0.0)
        if isinstance(entry, list) and len(entry) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry
        ):
            return complex(entry[0], entry[1])
        raise MatrixFileError(f"complex entry must be a number or an [re, im] pair, got {entry!r}")
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return float(entry)
    raise MatrixFileError(f"real entry must be a number, got {entry!r}")


def matrix_from_file(doc: MatrixFile) -> np.ndarray:
    if len(doc.data) != doc.rows or any(
        not isinstance(row, list) or len(row) != doc.cols for row in doc.data
    ):
        raise MatrixFileError(f"data shape does not match rows={doc.rows}, cols={doc.cols}")
    values = [[_scalar(entry, doc.complex) for entry in row] for row in doc.data]
    arr = np.array(values, dtype=np.complex128 if doc.complex else np.float64)
    if not np.all(np.isfinite(arr)):
        raise MatrixFileError("entries must be finite")
    return arr


def parse_matrix(text: str) -> np.ndarray:
    try:
        raw = json.loads(text, parse_constant=_reject_constant)
        doc = MatrixFile.model_validate(raw)
    except json.JSONDecodeError as e:
        raise MatrixFileError(f"invalid JSON: {e}") from e
    except ValidationError as e:
        raise MatrixFileError(f"invalid MatrixFile: {e.errors()[0]['msg']}") from e
    return matrix_from_file(doc)


def read_matrix(path: str | Path) -> np.ndarray:
    """Load a MatrixFile (JSON) or, for real matrices, a CSV file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise MatrixFileError(f"cannot read {path}: {e}") from e
    if path.suffix.lower() == ".csv":
        try:
            arr = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
        except ValueError as e:
            raise MatrixFileError(f"invalid CSV matrix {path}: {e}") from e
        if arr.size == 0 or not np.all(np.isfinite(arr)):
            raise MatrixFileError(f"CSV matrix {path} is empty or not finite")
        return arr
    logger.debug("reading matrix file %s", path)
    return parse_matrix(text)


def read_vector(path: str | Path) -> np.ndarray:
    """A d x 1 or 1 x d matrix file, flattened."""
    arr = read_matrix(path)
    if 1 not in arr.shape:
        raise MatrixFileError(f"{path} holds a {arr.shape[0]}x{arr.shape[1]} matrix, expected a vector")
    return arr.ravel()


def matrix_to_file(arr: np.ndarray) -> dict:
    return array_payload(np.atleast_2d(np.asarray(arr)))


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return array_payload(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _encode(obj: Any, indent: int) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        # rows of scalars stay on one line
        if all(not isinstance(v, (list, dict)) for v in obj):
            return "[" + ", ".join(_encode(v, 0) for v in obj) + "]"
        items = ",\n".join(inner + _encode(v, indent + 1) for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f"{inner}{json.dumps(k)}: {_encode(obj[k], indent + 1)}" for k in sorted(obj)
        )
        return "{\n" + items + "\n" + pad + "}"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def canonical_dumps(obj: Any) -> str:
    return _encode(to_jsonable(obj), 0) + "\n"


def write_matrix(arr: np.ndarray) -> str:
    return canonical_dumps(matrix_to_file(arr))
