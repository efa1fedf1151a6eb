import logging

import click

from ..exceptions import EXIT_CRITERION_FAILED, EXIT_NOT_A_FRAME, NotAFrame, PreconditionFailed
from ..models.models import VectorFamily
from ..models.schemas import AnalysisReport, NotAFrameReport
from ..services import frame_service as frames
from ..services import surgery_service as surgery
from ..services.report_formatter import read_matrix
from .common import emit, handle_errors, out_option, tol_option

logger = logging.getLogger(__name__)

router = click.Group()


@router.command("analyze")
@click.argument("frame_file", type=click.Path(exists=True, dir_okay=False))
@tol_option
@out_option
@handle_errors
def analyze(frame_file, tol, out):
    """Bounds, tight/Parseval/Riesz flags, canonical dual and Parseval transform of a frame file."""
    F = VectorFamily.from_columns(read_matrix(frame_file))
    logger.info("analyze %s (d=%d, N=%d)", frame_file, F.dim, F.count)
    try:
        bounds = frames.frame_bounds(F)
    except NotAFrame as e:
        emit(NotAFrameReport(dim=F.dim, count=F.count, lambda_min=e.lambda_min), out, EXIT_NOT_A_FRAME)
        return

    v_min, v_max = frames.bound_witnesses(F)
    riesz = frames.is_riesz_basis(F, tol)
    try:
        riesz_bounds = frames.riesz_bounds(F, tol) if riesz else None
    except PreconditionFailed:
        riesz_bounds = None
    report = AnalysisReport(
        dim=F.dim,
        count=F.count,
        A=bounds.lower,
        B=bounds.upper,
        tight=frames.is_tight(F, tol),
        parseval=frames.is_parseval(F, tol),
        riesz_basis=riesz,
        riesz_bounds=riesz_bounds,
        lambda_min_vector=v_min,
        lambda_max_vector=v_max,
        canonical_dual=frames.synthesis_matrix(frames.canonical_dual(F)),
        parseval_transform=frames.synthesis_matrix(frames.parseval_transform(F)),
    )
    emit(report, out)


@router.command("remove")
@click.argument("frame_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--index", "index", type=int, required=True, help="1-based index of the vector to remove.")
@tol_option
@out_option
@handle_errors
def remove(frame_file, index, tol, out):
    """Element-removal criterion ||S^{-1/2} f_j|| <= sqrt(A/B) with ground-truth bounds."""
    F = VectorFamily.from_columns(read_matrix(frame_file))
    report = surgery.removal_test(F, index, tol)
    emit(report, out, 0 if report.removable else EXIT_CRITERION_FAILED)
