import click

from .config import configure_logging
from .routers import frames as frames_router
from .routers import manifest as manifest_router
from .routers import operators as operators_router
from .routers import orbits as orbits_router
from .routers.common import include_router


@click.group(name="framekit")
@click.option("--log", "log_level", type=click.Choice(["error", "info", "debug"]), default=None,
              help="Log level for stderr; defaults to FRAMEKIT_LOG.")
def cli(log_level):
    """Finite-dimensional frame toolkit: frame bounds, element removal,
    operator orbits and perturbation of orbit frames."""
    configure_logging(log_level)


# command registration
include_router(cli, frames_router.router)
include_router(cli, orbits_router.router)
include_router(cli, operators_router.router)
include_router(cli, manifest_router.router)

if __name__ == "__main__":
    cli()
