from typing import Sequence

import numpy as np
from pydantic import Field, field_validator, model_validator

from ..config import settings
from .base import Array, FrameKitModel, finite_array


class EigenDecomposition(FrameKitModel):
    # values ascending, columns of vectors orthonormal
    values: Array
    vectors: Array


class SvdResult(FrameKitModel):
    # M = left @ diag(singular_values) @ right^*, singular values descending
    singular_values: Array
    left: Array
    right: Array


class VectorFamily(FrameKitModel):
    """Ordered family {f_k} in a d-dimensional space, stored one vector per row."""

    vectors: Array

    @field_validator("vectors", mode="before")
    @classmethod
    def _check_vectors(cls, value):
        return finite_array(value, ndim=2)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[complex]]) -> "VectorFamily":
        return cls(vectors=np.array([np.asarray(v) for v in vectors]))

    @classmethod
    def from_columns(cls, matrix) -> "VectorFamily":
        return cls(vectors=np.asarray(matrix).T)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def columns(self) -> np.ndarray:
        return self.vectors.T

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, k: int) -> np.ndarray:
        return self.vectors[k]

    def without(self, k: int) -> "VectorFamily":
        """Drop the vector at zero-based position k."""
        return VectorFamily(vectors=np.delete(self.vectors, k, axis=0))

    def transformed(self, matrix: np.ndarray) -> "VectorFamily":
        """The family {M f_k}."""
        return VectorFamily.from_columns(matrix @ self.columns)


class FrameBounds(FrameKitModel):
    lower: float = Field(gt=0)
    upper: float

    @model_validator(mode="after")
    def _ordered(self):
        if self.upper < self.lower:
            raise ValueError(f"upper bound {self.upper} below lower bound {self.lower}")
        return self

    @property
    def ratio(self) -> float:
        return self.lower / self.upper


class OperatorSpec(FrameKitModel):
    matrix: Array

    @field_validator("matrix", mode="before")
    @classmethod
    def _check_square(cls, value):
        arr = finite_array(value, ndim=2)
        if arr.shape[0] != arr.shape[1]:
            raise ValueError(f"operator must be square, got shape {arr.shape}")
        return arr

    @classmethod
    def of(cls, matrix) -> "OperatorSpec":
        if isinstance(matrix, OperatorSpec):
            return matrix
        return cls(matrix=matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


class OrbitConfig(FrameKitModel):
    operator: OperatorSpec
    seed: Array
    max_length: int = Field(default_factory=lambda: settings.N_MAX, gt=0)
    tail_tol: float = Field(default_factory=lambda: settings.TAIL_TOL, gt=0)

    @field_validator("operator", mode="before")
    @classmethod
    def _coerce_operator(cls, value):
        return OperatorSpec.of(value)

    @field_validator("seed", mode="before")
    @classmethod
    def _check_seed(cls, value):
        return finite_array(np.ravel(np.asarray(value)), ndim=1)

    @model_validator(mode="after")
    def _consistent(self):
        if self.seed.shape[0] != self.operator.dim:
            raise ValueError(
                f"seed has length {self.seed.shape[0]}, operator acts on dimension {self.operator.dim}"
            )
        if self.max_length < self.operator.dim:
            raise ValueError(f"max_length {self.max_length} below dimension {self.operator.dim}")
        return self
