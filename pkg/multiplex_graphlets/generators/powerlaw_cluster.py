"""Powerlaw-cluster (Holme-Kim) generator handler."""

import networkx as nx

from multiplex_graphlets.generators.base import BaseGeneratorHandler, GeneratorSpec


class PowerlawClusterHandler(BaseGeneratorHandler):
    """Preferential attachment where each added edge is followed by a triangle-closing step
    with probability ``triangle_probability``.

    Growth starts from ``k`` isolated nodes (``nx.powerlaw_cluster_graph`` takes no
    initial graph), whereas the Barabasi-Albert handler starts from a ``k``-clique.
    """

    def build(self, spec: GeneratorSpec, seed: int) -> nx.Graph:
        """Build a clustered scale-free graph."""
        return nx.powerlaw_cluster_graph(spec.n, spec.k, spec.triangle_probability, seed=seed)
