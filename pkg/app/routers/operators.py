import logging

import click
import numpy as np

from ..config import settings
from ..models.models import OperatorSpec
from ..models.schemas import SpectralReport
from ..services import numeric_core as nc
from ..services import orbit_service as orbits
from ..services import stability_service as stability
from ..services.report_formatter import read_matrix, read_vector
from .common import emit, handle_errors, n_max_option, out_option, tail_tol_option, tol_option

logger = logging.getLogger(__name__)

router = click.Group()


@router.command("spectral")
@click.argument("operator_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--samples", type=click.IntRange(min=0), default=None, help="Random perturbations inside the neighborhood.")
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=None, help="Seed of the experiment generator.")
@n_max_option
@tail_tol_option
@out_option
@handle_errors
def spectral(operator_file, samples, seed, n_max, tail_tol, out):
    """Norm, spectral radius, invertibility neighborhood and E(H) membership of an operator."""
    t = OperatorSpec.of(read_matrix(operator_file))
    samples = settings.NEIGHBORHOOD_SAMPLES if samples is None else samples
    rng = np.random.default_rng(settings.SEED if seed is None else seed)

    radius = orbits.safe_neighborhood_radius(t)
    certificates = orbits.sample_neighborhood(t, rng, samples) if radius is not None else []
    in_e, witness = orbits.find_orbit_frame_seed(t, rng, n_max=n_max, tail_tol=tail_tol)
    logger.info("spectral %s: radius=%s, in_E=%s", operator_file, radius, in_e)

    report = SpectralReport(
        norm=nc.operator_norm(t.matrix),
        spectral_radius=nc.spectral_radius(t.matrix),
        sigma_min=float(nc.singular_values(t.matrix)[-1]),
        invertible=radius is not None,
        neighborhood_radius=radius,
        samples=len(certificates),
        samples_invertible=sum(c.perturbed_invertible for c in certificates),
        max_certificate=max((c.certificate for c in certificates), default=None),
        in_E=in_e,
        in_E_witness=witness,
    )
    emit(report, out)


@router.command("perturb")
@click.argument("operator_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("base_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("perturbed_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--n", "n", type=click.IntRange(min=0), required=True, help="Orbit truncation {T^i f}_{i<=n}.")
@tol_option
@out_option
@handle_errors
def perturb(operator_file, base_file, perturbed_file, n, tol, out):
    """Sufficient condition mu < sqrt(A) for the perturbed orbit to stay a frame."""
    # a base orbit that is not a frame surfaces as BaseNotAFrame, exit 3
    report = stability.stability_test(
        read_matrix(operator_file), read_vector(base_file), read_vector(perturbed_file), n, tol
    )
    emit(report, out)
