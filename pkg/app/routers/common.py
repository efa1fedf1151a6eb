"""Shared plumbing for the command routers: report output, exit codes and the
error boundary every command runs inside."""

import functools
import logging
from pathlib import Path
from typing import Any, Callable

import click
import numpy as np
from pydantic import ValidationError

from ..exceptions import EXIT_INTERNAL, EXIT_OK, EXIT_PARSE, FrameKitError
from ..services.report_formatter import canonical_dumps

logger = logging.getLogger(__name__)


def include_router(group: click.Group, router: click.Group) -> None:
    for name, command in router.commands.items():
        group.add_command(command, name)


def emit(report: Any, out: str | None, exit_code: int = EXIT_OK) -> None:
    text = canonical_dumps(report)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    if exit_code != EXIT_OK:
        click.get_current_context().exit(exit_code)


def handle_errors(command: Callable) -> Callable:
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        out = kwargs.get("out")
        try:
            return command(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except FrameKitError as e:
            logger.error("%s: %s", type(e).__name__, e.detail)
            emit(e.to_report(), out, e.exit_code)
        except np.linalg.LinAlgError as e:
            logger.exception("numerical failure")
            emit({"error": "LinAlgError", "detail": str(e)}, out, EXIT_INTERNAL)
        except ValidationError as e:
            logger.error("rejected input: %s", e)
            emit({"error": "ValidationError", "detail": str(e.errors()[0]["msg"])}, out, EXIT_PARSE)
        except ValueError as e:
            logger.error("rejected input: %s", e)
            emit({"error": "ValueError", "detail": str(e)}, out, EXIT_PARSE)
        except Exception as e:
            logger.exception("internal error")
            emit({"error": "InternalError", "detail": str(e)}, out, EXIT_INTERNAL)

    return wrapper


def parse_ks(value: str | None) -> list[int]:
    if not value:
        return [1, 2, 4]
    try:
        ks = [int(part) for part in value.split(",") if part.strip()]
    except ValueError as e:
        raise ValueError(f"--ks expects comma-separated integers, got {value!r}") from e
    if not ks or any(k < 1 for k in ks):
        raise ValueError("--ks values must be positive integers")
    return ks


out_option = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report here instead of stdout.")
tol_option = click.option("--tol", type=float, default=None, help="Predicate tolerance.")
n_max_option = click.option("--n-max", "n_max", type=int, default=None, help="Maximum orbit truncation.")
tail_tol_option = click.option("--tail-tol", "tail_tol", type=float, default=None, help="Tail tolerance for truncation.")
