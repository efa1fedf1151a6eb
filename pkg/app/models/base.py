from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, ConfigDict, PlainSerializer


class FrameKitModel(BaseModel):
    # inf stays a float in JSON mode; the canonical writer renders it as "inf"
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True, ser_json_inf_nan="constants")


def finite_array(value, ndim: int) -> np.ndarray:
    """Coerce to a float or complex array of the given rank with finite entries."""
    arr = np.asarray(value)
    if arr.dtype.kind not in "fc":
        arr = arr.astype(np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    if 0 in arr.shape:
        raise ValueError("empty arrays are not admitted")
    if not np.all(np.isfinite(arr)):
        raise ValueError("entries must be finite (no NaN/Inf)")
    return arr


def json_entry(z) -> Any:
    if np.iscomplexobj(z):
        return [float(np.real(z)), float(np.imag(z))]
    return float(z)


def array_payload(arr) -> Any:
    """Vectors as flat lists, matrices as MatrixFile objects."""
    arr = np.asarray(arr)
    if arr.ndim == 1:
        return [json_entry(z) for z in arr]
    arr = np.atleast_2d(arr)
    return {
        "rows": int(arr.shape[0]),
        "cols": int(arr.shape[1]),
        "complex": bool(np.iscomplexobj(arr)),
        "data": [[json_entry(z) for z in row] for row in arr],
    }


Array = Annotated[np.ndarray, PlainSerializer(array_payload, when_used="json")]
