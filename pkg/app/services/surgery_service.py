"""Single-element removal from a non-tight frame.

If ||S^{-1/2} f_j|| <= sqrt(A/B) then F without f_j is still a frame, and the
Parseval-transformed remainder has lower bound at least 1 - A/B.
Indices are 1-based, as on the command line.
"""

import logging

import numpy as np

from ..config import settings
from ..exceptions import IndexOutOfRange, NotAFrame, TightFrameExcluded, TooFewVectors
from ..models.models import VectorFamily
from ..models.schemas import RemovalReport
from . import frame_service as frames

logger = logging.getLogger(__name__)


def removal_test(F: VectorFamily, j: int, tol: float | None = None) -> RemovalReport:
    tol = settings.PREDICATE_TOL if tol is None else tol
    if not 1 <= j <= F.count:
        raise IndexOutOfRange(f"index {j} outside 1..{F.count}", index=j, count=F.count)
    if F.count < F.dim + 1:
        raise TooFewVectors(f"removal needs at least d+1 = {F.dim + 1} vectors, got {F.count}")

    bounds = frames.frame_bounds(F)
    if (bounds.upper - bounds.lower) / bounds.upper <= tol:
        raise TightFrameExcluded(
            f"tight frame (A={bounds.lower:.6g}, B={bounds.upper:.6g}) excluded from the removal criterion"
        )

    transformed = frames.parseval_transform(F)
    g_j = transformed[j - 1]
    criterion_value = float(np.linalg.norm(g_j))
    threshold = float(np.sqrt(bounds.ratio))
    removable = criterion_value <= threshold + tol
    certified_lower_bound = 1.0 - bounds.ratio

    remainder = F.without(j - 1)
    try:
        post_bounds = frames.frame_bounds(remainder)
        post_lambda_min = post_bounds.lower
    except NotAFrame as e:
        post_bounds, post_lambda_min = None, e.lambda_min

    # lambda_min(I - g_j g_j^*) for the Parseval-transformed remainder
    transformed_lower = frames.extreme_eigenvalues(transformed.without(j - 1))[0]
    certificate_holds = None
    if removable:
        certificate_holds = post_bounds is not None and transformed_lower >= certified_lower_bound - tol

    logger.info(
        "removal of f_%d: criterion %.6g vs threshold %.6g -> %s",
        j, criterion_value, threshold, "removable" if removable else "not certified",
    )
    return RemovalReport(
        index=j,
        bounds=bounds,
        criterion_value=criterion_value,
        threshold=threshold,
        removable=removable,
        post_removal_bounds=post_bounds,
        post_removal_lambda_min=post_lambda_min,
        certified_lower_bound=certified_lower_bound,
        transformed_lower_bound=transformed_lower,
        certificate_holds=certificate_holds,
    )


def removal_scan(F: VectorFamily, tol: float | None = None) -> list[RemovalReport]:
    return [removal_test(F, j, tol) for j in range(1, F.count + 1)]
