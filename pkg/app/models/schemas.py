from typing import List, Literal, Optional

from pydantic import ConfigDict, Field, computed_field, field_validator

from .base import Array, FrameKitModel
from .models import FrameBounds


# File schemas
class MatrixFile(FrameKitModel):
    rows: int = Field(gt=0)
    cols: int = Field(gt=0)
    complex: bool = False
    data: list

    model_config = ConfigDict(
        json_schema_extra={
            "example": {"rows": 2, "cols": 2, "complex": False, "data": [[0.0, 1.0], [1.0, 1.0]]}
        }
    )


class RunManifest(FrameKitModel):
    command: Literal["analyze", "represent", "orbit", "remove", "perturb", "spectral", "vset"]
    inputs: dict[str, str] = Field(default_factory=dict)
    tol: Optional[float] = Field(default=None, gt=0)
    tail_tol: Optional[float] = Field(default=None, gt=0)
    n_max: Optional[int] = Field(default=None, gt=0)
    n: Optional[int] = Field(default=None, ge=0)
    index: Optional[int] = None
    ks: Optional[List[int]] = None
    samples: Optional[int] = Field(default=None, ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    out: Optional[str] = None


# frame-core
class AnalysisReport(FrameKitModel):
    dim: int
    count: int
    A: float
    B: float
    tight: bool
    parseval: bool
    riesz_basis: bool
    riesz_bounds: Optional[FrameBounds] = None
    lambda_min_vector: Array
    lambda_max_vector: Array
    canonical_dual: Array
    parseval_transform: Array
    not_a_frame: bool = False


class NotAFrameReport(FrameKitModel):
    dim: int
    count: int
    not_a_frame: bool = True
    lambda_min: float


# frame-surgery
class RemovalReport(FrameKitModel):
    index: int
    bounds: FrameBounds
    criterion_value: float
    threshold: float
    removable: bool
    post_removal_bounds: Optional[FrameBounds] = None
    post_removal_lambda_min: float
    certified_lower_bound: float
    transformed_lower_bound: float
    # None when the criterion did not apply
    certificate_holds: Optional[bool] = None


# orbit-rep
class KernelShiftReport(FrameKitModel):
    invariant: bool
    residual: float
    witness: Optional[Array] = None
    kernel_dimension: int
    tested_dimension: int
    # kernel vectors with a nonzero last coordinate shift past index N
    caveat: str = "truncated test: kernel vectors with nonzero last coordinate are not tested"


class RepresentationReport(FrameKitModel):
    operator: Optional[Array] = None
    least_squares_operator: Array
    max_residual: float
    exact: bool
    linearly_independent: bool
    kernel_shift_invariant: bool
    kernel_shift: KernelShiftReport


class OrbitReport(FrameKitModel):
    truncation_used: int
    converged: bool
    bounds_estimate: Optional[FrameBounds] = None
    lambda_min: float
    tail_bound: float
    upper_bound_estimate: Optional[float] = None
    in_V: bool
    verdict: Literal["in_V", "not_in_V", "undecidable"]
    reason: Optional[Literal["rank", "diverging_bessel", "tail_dominates"]] = None

    @computed_field
    @property
    def A(self) -> Optional[float]:
        return self.bounds_estimate.lower if self.bounds_estimate else None

    @computed_field
    @property
    def B(self) -> Optional[float]:
        return self.bounds_estimate.upper if self.bounds_estimate else None


class IteratedOperators(FrameKitModel):
    n: int
    synthesis: Array
    analysis: Array
    frame_operator: Array
    synthesis_discrepancy: float
    analysis_discrepancy: float
    frame_operator_discrepancy: float
    factorization_discrepancy: float
    agree: bool


class RieszVerdict(FrameKitModel):
    riesz_basis: bool
    invertible: bool
    sigma_min: float
    holds: bool


class BallMembership(FrameKitModel):
    member: bool
    witness_n: Optional[int] = None
    min_distance: float
    radius: float
    searched_up_to: int
    # false verdicts only mean "not found within searched_up_to"
    bounded_search: bool


class SeedVerdict(FrameKitModel):
    index: int
    in_V: bool
    verdict: str
    reason: Optional[str] = None
    A: Optional[float] = None


class InclusionCheck(FrameKitModel):
    seed_index: int
    center_index: int
    k: int
    membership: BallMembership


class VSetExperimentReport(FrameKitModel):
    n_max: int
    ks: List[int]
    seeds: List[SeedVerdict]
    checks: int
    violations: List[InclusionCheck]
    vacuous: bool

    @computed_field
    @property
    def forward_inclusion_holds(self) -> bool:
        return not self.violations


class NeighborhoodCertificate(FrameKitModel):
    radius: float
    distance: float
    inside: bool
    certificate: float
    perturbed_invertible: bool


class SpectralReport(FrameKitModel):
    norm: float
    spectral_radius: float
    sigma_min: float
    invertible: bool
    neighborhood_radius: Optional[float] = None
    samples: int = 0
    samples_invertible: int = 0
    max_certificate: Optional[float] = None
    in_E: bool
    in_E_witness: Optional[Array] = None


# stability
class StabilityReport(FrameKitModel):
    n: int
    lower_bound_A: float
    upper_bound_B: float
    k_inverse: float
    k: float
    mu: float = Field(ge=0)
    sufficient: bool
    certified_lower_bound: Optional[float] = None
    certified_upper_bound: Optional[float] = None
    bessel_difference: float
    oracle_bounds: Optional[FrameBounds] = None
    oracle_lambda_min: float

    @field_validator("certified_lower_bound")
    @classmethod
    def _positive_when_sufficient(cls, value):
        if value is not None and value <= 0:
            raise ValueError("certified lower bound must be positive")
        return value
