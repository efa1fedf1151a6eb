import logging

import click
import numpy as np

from ..config import settings
from ..exceptions import DimensionMismatch, EXIT_NO_REPRESENTATION
from ..models.models import OperatorSpec, OrbitConfig, VectorFamily
from ..services import orbit_service as orbits
from ..services.report_formatter import read_matrix, read_vector, write_matrix
from .common import emit, handle_errors, n_max_option, out_option, parse_ks, tail_tol_option, tol_option

logger = logging.getLogger(__name__)

router = click.Group()


@router.command("represent")
@click.argument("frame_file", type=click.Path(exists=True, dir_okay=False))
@tol_option
@out_option
@handle_errors
def represent(frame_file, tol, out):
    """Find T with T f_k = f_{k+1}; exit 4 when no exact representation exists."""
    F = VectorFamily.from_columns(read_matrix(frame_file))
    report = orbits.build_representation(F, tol)
    emit(report, out, 0 if report.exact else EXIT_NO_REPRESENTATION)


def _orbit_config(operator_file, seed_file, n_max, tail_tol) -> OrbitConfig:
    t = OperatorSpec.of(read_matrix(operator_file))
    return OrbitConfig(
        operator=t,
        seed=read_vector(seed_file),
        max_length=max(t.dim, n_max or settings.N_MAX),
        tail_tol=tail_tol or settings.TAIL_TOL,
    )


@router.command("orbit")
@click.argument("operator_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("seed_file", type=click.Path(exists=True, dir_okay=False))
@n_max_option
@tail_tol_option
@click.option("--dump", type=click.Path(dir_okay=False), default=None, help="Write the truncated orbit as a MatrixFile.")
@out_option
@handle_errors
def orbit(operator_file, seed_file, n_max, tail_tol, dump, out):
    """Decide whether the orbit {T^k phi} is a frame, at truncation with a tail bound."""
    config = _orbit_config(operator_file, seed_file, n_max, tail_tol)
    logger.info("orbit of %s under %s (n_max=%d)", seed_file, operator_file, config.max_length)
    report = orbits.orbit_frame_report(config)
    if dump:
        with open(dump, "w", encoding="utf-8") as fh:
            fh.write(write_matrix(orbits.orbit(config).columns))
    emit(report, out)


@router.command("vset")
@click.argument("operator_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--seeds", "seeds_file", type=click.Path(exists=True, dir_okay=False), required=True,
              help="MatrixFile with one seed per column.")
@click.option("--ks", type=str, default=None, help="Comma-separated radii indices, e.g. 1,2,4.")
@n_max_option
@tail_tol_option
@out_option
@handle_errors
def vset(operator_file, seeds_file, ks, n_max, tail_tol, out):
    """Check every in-V seed against the balls B(f, k) of the other in-V seeds."""
    t = OperatorSpec.of(read_matrix(operator_file))
    seeds = read_matrix(seeds_file)
    if seeds.shape[0] != t.dim:
        raise DimensionMismatch(f"seeds file has {seeds.shape[0]} rows, operator acts on dimension {t.dim}; seeds go in columns")
    report = orbits.vset_ball_experiment(t, list(np.asarray(seeds).T), parse_ks(ks), n_max, tail_tol)
    emit(report, out)
