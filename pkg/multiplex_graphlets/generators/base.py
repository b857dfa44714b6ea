"""Base generator handler and the generator spec record."""

import logging
import math
from abc import ABC, abstractmethod
from typing import Any

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from multiplex_graphlets.helpers.common.constants import BenchmarkGrid
from multiplex_graphlets.helpers.common.enums import GeneratorFamily
from multiplex_graphlets.helpers.common.exceptions import GeneratorError

logger = logging.getLogger(__name__)

SEED_LIMIT = 2**64


def derive_seed(*words: int) -> int:
    """Mix integer words into one 64-bit seed with NumPy's ``SeedSequence``."""
    return int(np.random.SeedSequence([int(word) for word in words]).generate_state(1, dtype=np.uint64)[0])


def derive_plex_seed(seed: int, plex: int) -> int:
    """Seed of plex ``plex``: the first 64-bit word of ``SeedSequence([seed, plex])``."""
    return derive_seed(seed, plex)


class GeneratorSpec(BaseModel):
    """Parameters of one synthetic single-plex network.

    ``k`` is derived as ``floor(p * n)``; for Watts-Strogatz it is rounded down to an
    even number so the ring lattice is well formed.
    """

    model_config = ConfigDict(frozen=True)

    family: str = Field(min_length=1)
    n: int = Field(ge=2)
    p: float = Field(gt=0.0, lt=1.0)
    seed: int = Field(ge=0, lt=SEED_LIMIT)
    beta: float = Field(default=BenchmarkGrid.REWIRING_PROBABILITY, ge=0.0, le=1.0)
    triangle_probability: float = Field(default=BenchmarkGrid.TRIANGLE_PROBABILITY, ge=0.0, le=1.0)
    replicate: int = Field(default=0, ge=0)

    @field_validator("family", mode="before")
    @classmethod
    def _lowercase_family(cls, value: Any) -> Any:
        return str(value).lower()

    @computed_field
    @property
    def k(self) -> int:
        """Degree parameter derived from p and n."""
        k = math.floor(self.p * self.n)
        if self.family == GeneratorFamily.WS:
            k -= k % 2
        return k

    @model_validator(mode="after")
    def _check_k(self) -> "GeneratorSpec":
        if self.family != GeneratorFamily.ER and self.k < 1:
            raise ValueError(f"k = floor(p*n) must be at least 1, got {self.k} for n={self.n}, p={self.p}")
        return self

    def slug(self) -> str:
        """File-name friendly identifier, e.g. ``pl_n300_p0.35_r07``."""
        return f"{self.family}_n{self.n}_p{self.p:g}_r{self.replicate:02d}"


class BaseGeneratorHandler(ABC):
    """Abstract base class for single-plex generator handlers.

    Each family (ER, WS, BA, PL, ...) has a handler that validates a spec and
    builds one seeded networkx graph on nodes ``0..n-1``.

    Example:
        class RingHandler(BaseGeneratorHandler):
            def build(self, spec, seed):
                return nx.cycle_graph(spec.n)
    """

    def __init__(self, config: dict[str, Any] | None = None) -> None:
        """Initialize the handler with optional family-specific settings."""
        self.config = config or {}
        logger.debug("Initialized %s with config: %s", self.__class__.__name__, self.config)

    def validate_spec(self, spec: GeneratorSpec) -> None:
        """Check family-specific constraints.

        Raises:
            GeneratorError: If the spec cannot be generated by this family.
        """
        if spec.k >= spec.n:
            raise GeneratorError(f"{spec.family}: k={spec.k} must be smaller than n={spec.n}")

    @abstractmethod
    def build(self, spec: GeneratorSpec, seed: int) -> nx.Graph:
        """Build one graph for ``spec`` using ``seed``."""

    def generate(self, spec: GeneratorSpec, seed: int) -> nx.Graph:
        """Validate, then build; networkx parameter errors become ``GeneratorError``."""
        self.validate_spec(spec)
        try:
            return self.build(spec, seed)
        except nx.NetworkXError as exc:
            raise GeneratorError(f"{spec.family}: {exc}") from exc
