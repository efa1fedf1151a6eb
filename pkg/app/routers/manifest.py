"""`framekit run MANIFEST`: replay a command from a RunManifest document.

Input paths and the output path in the manifest are resolved against the
manifest's own directory.
"""

import logging
from pathlib import Path

import click

from ..models.schemas import RunManifest
from .common import handle_errors

logger = logging.getLogger(__name__)

router = click.Group()


def _resolve(base: Path, value: str) -> str:
    path = Path(value)
    return str(path if path.is_absolute() else base / path)


def _arguments(manifest: RunManifest, base: Path) -> dict:
    arguments = {f"{key}_file": _resolve(base, value) for key, value in manifest.inputs.items()}
    arguments.update(
        tol=manifest.tol,
        tail_tol=manifest.tail_tol,
        n_max=manifest.n_max,
        n=manifest.n,
        index=manifest.index,
        ks=",".join(str(k) for k in manifest.ks) if manifest.ks else None,
        samples=manifest.samples,
        seed=manifest.seed,
        out=_resolve(base, manifest.out) if manifest.out else None,
    )
    return arguments


@router.command("run")
@click.argument("manifest_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@handle_errors
def run(ctx, manifest_file):
    """Dispatch the command named in a RunManifest with its inputs and parameters."""
    path = Path(manifest_file)
    manifest = RunManifest.model_validate_json(path.read_text(encoding="utf-8"))
    command = ctx.parent.command.get_command(ctx.parent, manifest.command)

    accepted = {p.name: p for p in command.params}
    arguments = _arguments(manifest, path.parent)
    unknown = sorted(k for k, v in arguments.items() if k not in accepted and k.endswith("_file"))
    if unknown:
        raise ValueError(f"{manifest.command} does not take inputs {', '.join(unknown)}")
    arguments = {k: v for k, v in arguments.items() if k in accepted and v is not None}
    missing = sorted(name for name, p in accepted.items() if p.required and name not in arguments)
    if missing:
        raise ValueError(f"{manifest.command} needs {', '.join(missing)}")

    logger.info("run %s from %s", manifest.command, path)
    ctx.invoke(command, **arguments)
