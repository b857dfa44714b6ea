"""Erdos-Renyi generator handler."""

import networkx as nx

from multiplex_graphlets.generators.base import BaseGeneratorHandler, GeneratorSpec


class ErdosRenyiHandler(BaseGeneratorHandler):
    """G(n, p): every node pair is linked independently with probability p."""

    def validate_spec(self, spec: GeneratorSpec) -> None:
        """Any valid spec works; k is not used."""

    def build(self, spec: GeneratorSpec, seed: int) -> nx.Graph:
        """Build a G(n, p) graph."""
        return nx.gnp_random_graph(spec.n, spec.p, seed=seed)
