"""Run configuration models.

Environment Variables:
    MULTIPLEX_GRAPHLETS_WORKERS: Default worker count (default: the CPU count)
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from multiplex_graphlets.helpers.common.constants import BenchmarkGrid, Defaults, EnvVars, ErrorMessages
from multiplex_graphlets.helpers.common.enums import GeneratorFamily, Taxonomy
from multiplex_graphlets.helpers.common.exceptions import ConfigError
from multiplex_graphlets.helpers.manifest import stable_hash

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)

# Fields that never change results
_UNHASHED_FIELDS = {"workers", "output_dir"}


def default_workers() -> int:
    """Worker count from MULTIPLEX_GRAPHLETS_WORKERS, else the CPU count."""
    cpus = os.cpu_count() or 1
    raw = os.environ.get(EnvVars.WORKERS)
    if raw is None:
        return cpus
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning("Ignoring non-integer %s=%r", EnvVars.WORKERS, raw)
        return cpus


class _HashedConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    workers: int = Field(default_factory=default_workers, ge=1)
    output_dir: Path = Path("runs")

    def config_hash(self) -> str:
        """SHA-256 over the result-affecting fields."""
        return stable_hash(self.model_dump(mode="json", exclude=_UNHASHED_FIELDS))

    def require_seed(self, step: str) -> int:
        """Return the seed or raise ``ConfigError`` naming the stochastic step."""
        seed = getattr(self, "seed", None)
        if seed is None:
            raise ConfigError(ErrorMessages.SEED_REQUIRED.format(step=step))
        return seed


class RunConfig(_HashedConfig):
    """Configuration of k-plex sweeps and consensus runs."""

    inputs: list[Path] = Field(default_factory=list)
    k: int = Field(default=2, ge=1)
    max_size: int = Defaults.MAX_SIZE
    space: Taxonomy = Taxonomy.DISTINCT
    rho_min: float = Field(default=Defaults.RHO_MIN, ge=0.0, le=1.0)
    f_min: float = Field(default=Defaults.F_MIN, ge=0.0, le=1.0)
    g_min: float = Field(default=Defaults.G_MIN_SOCIAL, ge=0.0, le=1.0)
    seed: int | None = Field(default=None, ge=0)
    sample_size: int | None = Field(default=None, ge=1)
    combination_cap: int = Field(default=Defaults.COMBINATION_CAP, ge=1)
    grouping_file: Path | None = None

    @field_validator("max_size")
    @classmethod
    def _check_max_size(cls, value: int) -> int:
        if value not in (2, 3, 4):
            raise ValueError(f"max_size must be 2, 3 or 4, got {value}")
        return value

    @model_validator(mode="after")
    def _check_space(self) -> "RunConfig":
        if self.space != Taxonomy.FULL and self.max_size > 3:
            raise ValueError(ErrorMessages.REDUCED_MAX_SIZE)
        return self


class SyntheticConfig(_HashedConfig):
    """Configuration of the synthetic separation experiment (a desk-scale grid by default)."""

    families: list[str] = Field(default_factory=lambda: [str(family) for family in GeneratorFamily])
    sizes: list[int] = Field(default_factory=lambda: [100])
    probabilities: list[float] = Field(default_factory=lambda: [0.2, 0.5, 0.8])
    replicates: int = Field(default=5, ge=1)
    plex_counts: list[int] = Field(default_factory=lambda: [2])
    seed: int | None = Field(default=None, ge=0)
    max_size: int = Defaults.MAX_SIZE
    space: Taxonomy = Taxonomy.DISTINCT
    beta: float = Field(default=BenchmarkGrid.REWIRING_PROBABILITY, ge=0.0, le=1.0)
    triangle_probability: float = Field(default=BenchmarkGrid.TRIANGLE_PROBABILITY, ge=0.0, le=1.0)

    @field_validator("plex_counts")
    @classmethod
    def _check_plex_counts(cls, value: list[int]) -> list[int]:
        if not value or any(d < 1 for d in value):
            raise ValueError("plex_counts must be a non-empty list of positive integers")
        return value

    @model_validator(mode="after")
    def _check_scope(self) -> "SyntheticConfig":
        if self.max_size not in (2, 3, 4):
            raise ValueError(f"max_size must be 2, 3 or 4, got {self.max_size}")
        if self.space != Taxonomy.FULL and self.max_size > 3:
            raise ValueError(ErrorMessages.REDUCED_MAX_SIZE)
        return self


def build_config(model: type[ModelT], values: dict[str, Any]) -> ModelT:
    """Validate ``values`` into ``model``, translating validation failures to ``ConfigError``."""
    try:
        return model.model_validate(values)
    except ValidationError as exc:
        raise ConfigError(f"Invalid {model.__name__}: {exc}") from exc


def load_config(path: str | Path | None, model: type[ModelT], overrides: dict[str, Any] | None = None) -> ModelT:
    """Read a JSON config file (optional) and apply non-``None`` overrides, e.g. CLI flags.

    Raises:
        ConfigError: If the file is missing, not JSON, or fails validation.
    """
    values: dict[str, Any] = {}
    if path is not None:
        try:
            values = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ConfigError(f"Config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(values, dict):
            raise ConfigError(f"Config file {path} must contain a JSON object")
    values.update({key: value for key, value in (overrides or {}).items() if value is not None})
    config = build_config(model, values)
    logger.debug("Loaded %s (hash %s)", model.__name__, config.config_hash()[:12])
    return config
