from dotenv import load_dotenv
load_dotenv(dotenv_path=".env")

import logging
import sys
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # logging (FRAMEKIT_LOG)
    LOG: Literal["error", "info", "debug"] = "error"

    # tolerances, all relative to max(1, ||input||)
    PREDICATE_TOL: float = Field(1e-9, gt=0)
    DECOMPOSITION_TOL: float = Field(1e-10, gt=0)
    RANK_TOL: float = Field(1e-12, gt=0)
    HERMITIAN_TOL: float = Field(1e-12, gt=0)
    COND_TOL: float = Field(1e12, gt=0)
    STRICT_TOL: float = Field(1e-12, gt=0)

    # orbit truncation
    N_MAX: int = Field(512, gt=0)
    TAIL_TOL: float = Field(1e-10, gt=0)

    # experiments
    SEED: int = Field(0, ge=0, lt=2**64)
    MAX_WORKERS: int = Field(1, ge=1)
    NEIGHBORHOOD_SAMPLES: int = Field(32, ge=0)
    E_SEARCH_ATTEMPTS: int = Field(8, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="FRAMEKIT_",
        case_sensitive=True,
        extra="ignore",
    )


settings = Settings()

_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def configure_logging(level: str | None = None) -> None:
    """Route framekit records to stderr; stdout carries the JSON reports only."""
    root = logging.getLogger("app")
    root.setLevel(_LEVELS[level or settings.LOG])
    # rebind to the current stderr on every call
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[%(name)s] %(levelname)s %(message)s"))
    root.addHandler(handler)
