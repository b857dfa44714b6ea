"""Synthetic generator handler registry and factory."""

import logging

from multiplex_graphlets.helpers.common.exceptions import GeneratorError

logger = logging.getLogger(__name__)

# Maps family names to handler classes
GENERATOR_HANDLERS: dict[str, type] = {}


def register_generator(name: str, handler_class: type) -> None:
    """Register a generator handler.

    Args:
        name: The family name (e.g., 'er', 'ws', 'my_family')
        handler_class: The handler class (must inherit from BaseGeneratorHandler)

    Example:
        from multiplex_graphlets.generators import register_generator
        from my_generators import RingHandler

        register_generator('ring', RingHandler)
    """
    GENERATOR_HANDLERS[str(name)] = handler_class
    logger.debug("Registered generator handler for '%s': %s", name, handler_class.__name__)


def get_generator_handler(family: str, config: dict | None = None):
    """Get a generator handler instance by family.

    Returns:
        BaseGeneratorHandler: An instance of the registered handler.

    Raises:
        GeneratorError: If the family is not registered.
    """
    family = str(family).lower()
    if family not in GENERATOR_HANDLERS:
        available = ", ".join(GENERATOR_HANDLERS)
        raise GeneratorError(f"Unknown generator family: {family}. Available families: {available}.")
    return GENERATOR_HANDLERS[family](config or {})


# Import and register built-in families
from multiplex_graphlets.generators.barabasi_albert import BarabasiAlbertHandler  # noqa: E402
from multiplex_graphlets.generators.base import (  # noqa: E402
    BaseGeneratorHandler,
    GeneratorSpec,
    derive_plex_seed,
    derive_seed,
)
from multiplex_graphlets.generators.erdos_renyi import ErdosRenyiHandler  # noqa: E402
from multiplex_graphlets.generators.powerlaw_cluster import PowerlawClusterHandler  # noqa: E402
from multiplex_graphlets.generators.watts_strogatz import WattsStrogatzHandler  # noqa: E402
from multiplex_graphlets.helpers.common.enums import GeneratorFamily  # noqa: E402

register_generator(GeneratorFamily.ER, ErdosRenyiHandler)
register_generator(GeneratorFamily.WS, WattsStrogatzHandler)
register_generator(GeneratorFamily.BA, BarabasiAlbertHandler)
register_generator(GeneratorFamily.PL, PowerlawClusterHandler)

from multiplex_graphlets.generators.compose import generate_multiplex, generate_plex  # noqa: E402
from multiplex_graphlets.generators.grid import benchmark_grid, write_benchmark_grid  # noqa: E402

__all__ = [
    "GENERATOR_HANDLERS",
    "BarabasiAlbertHandler",
    "BaseGeneratorHandler",
    "ErdosRenyiHandler",
    "GeneratorSpec",
    "PowerlawClusterHandler",
    "WattsStrogatzHandler",
    "benchmark_grid",
    "derive_plex_seed",
    "derive_seed",
    "generate_multiplex",
    "generate_plex",
    "get_generator_handler",
    "register_generator",
    "write_benchmark_grid",
]
