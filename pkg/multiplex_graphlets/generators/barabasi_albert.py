"""Barabasi-Albert generator handler."""

import networkx as nx

from multiplex_graphlets.generators.base import BaseGeneratorHandler, GeneratorSpec


class BarabasiAlbertHandler(BaseGeneratorHandler):
    """Preferential attachment: each new node adds k edges, starting from a k-node clique.

    The result has ``C(k, 2) + k * (n - k)`` edges.
    """

    def build(self, spec: GeneratorSpec, seed: int) -> nx.Graph:
        """Build a scale-free graph grown from a seed clique."""
        initial = nx.complete_graph(spec.k) if spec.k > 1 else None
        return nx.barabasi_albert_graph(spec.n, spec.k, seed=seed, initial_graph=initial)
