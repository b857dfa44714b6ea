"""Single-plex generation and multiplex composition."""

import logging

import networkx as nx

from multiplex_graphlets.generators import get_generator_handler
from multiplex_graphlets.generators.base import GeneratorSpec, derive_plex_seed
from multiplex_graphlets.helpers.common.exceptions import GeneratorError
from multiplex_graphlets.multiplex import MultiplexGraph, default_plex_names

logger = logging.getLogger(__name__)


def _plex_edges(spec: GeneratorSpec, plex: int) -> list[tuple[int, int]]:
    graph: nx.Graph = get_generator_handler(spec.family).generate(spec, derive_plex_seed(spec.seed, plex))
    return sorted(tuple(sorted(edge)) for edge in graph.edges())


def generate_plex(spec: GeneratorSpec) -> MultiplexGraph:
    """One seeded single-plex network; uses the seed of plex 0."""
    return generate_multiplex(spec, 1)


def generate_multiplex(spec: GeneratorSpec, d: int) -> MultiplexGraph:
    """``d`` independent plexes from the same spec, merged into one labeled graph.

    Plex ``i`` is generated with ``derive_plex_seed(spec.seed, i)``.

    Raises:
        GeneratorError: On ``d < 1`` or parameters the family cannot generate.
    """
    if d < 1:
        raise GeneratorError(f"Plex count must be at least 1, got {d}")
    edge_lists = [_plex_edges(spec, plex) for plex in range(d)]
    graph = MultiplexGraph.from_plex_edge_lists(spec.n, default_plex_names(d), edge_lists)
    logger.debug("Generated %s with d=%d: %r", spec.slug(), d, graph)
    return graph
