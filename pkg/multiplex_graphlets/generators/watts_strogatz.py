"""Watts-Strogatz generator handler."""

import networkx as nx

from multiplex_graphlets.generators.base import BaseGeneratorHandler, GeneratorSpec
from multiplex_graphlets.helpers.common.exceptions import GeneratorError


class WattsStrogatzHandler(BaseGeneratorHandler):
    """Ring lattice of n nodes linked to their k nearest neighbors, each edge rewired with probability beta.

    Rewiring preserves the edge count ``n * k / 2``; ``beta = 0`` leaves the exact lattice.
    """

    def validate_spec(self, spec: GeneratorSpec) -> None:
        """Require an even k of at least 2 and smaller than n."""
        super().validate_spec(spec)
        if spec.k < 2 or spec.k % 2:
            raise GeneratorError(f"ws: k must be even and at least 2, got {spec.k}")

    def build(self, spec: GeneratorSpec, seed: int) -> nx.Graph:
        """Build a small-world graph."""
        return nx.watts_strogatz_graph(spec.n, spec.k, spec.beta, seed=seed)
