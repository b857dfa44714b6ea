"""Tests for synthetic generators, multiplex composition and the benchmark grid."""

import json
import math
import tempfile
from pathlib import Path
from unittest import TestCase

import networkx as nx
import numpy as np
from pydantic import ValidationError

from multiplex_graphlets.generators import (
    GENERATOR_HANDLERS,
    BaseGeneratorHandler,
    GeneratorSpec,
    benchmark_grid,
    derive_plex_seed,
    generate_multiplex,
    generate_plex,
    get_generator_handler,
    register_generator,
    write_benchmark_grid,
)
from multiplex_graphlets.generators.erdos_renyi import ErdosRenyiHandler
from multiplex_graphlets.helpers.common.exceptions import ConfigError, GeneratorError
from multiplex_graphlets.helpers.manifest import MANIFEST_NAME
from multiplex_graphlets.multiplex import PlexSelection, extract_kplex, read_multiplex


class RingHandler(BaseGeneratorHandler):
    """Deterministic cycle used to test registration."""

    def build(self, spec, seed):
        """Build C_n."""
        return nx.cycle_graph(spec.n)


class TestGeneratorSpec(TestCase):
    """Test cases for GeneratorSpec."""

    def test_k_is_derived(self):
        """Test k = floor(p * n)."""
        self.assertEqual(GeneratorSpec(family="ba", n=100, p=0.35, seed=1).k, 35)

    def test_ws_k_is_even(self):
        """Test that an odd k is rounded down for Watts-Strogatz."""
        self.assertEqual(GeneratorSpec(family="ws", n=10, p=0.3, seed=1).k, 2)

    def test_family_is_lowercased(self):
        """Test family normalization."""
        self.assertEqual(GeneratorSpec(family="PL", n=10, p=0.3, seed=1).family, "pl")

    def test_slug(self):
        """Test the file-name slug."""
        spec = GeneratorSpec(family="pl", n=300, p=0.35, seed=1, replicate=7)
        self.assertEqual(spec.slug(), "pl_n300_p0.35_r07")

    def test_invalid_parameters(self):
        """Test range checks."""
        with self.assertRaises(ValidationError):
            GeneratorSpec(family="ws", n=10, p=0.05, seed=1)
        with self.assertRaises(ValidationError):
            GeneratorSpec(family="er", n=10, p=1.5, seed=1)
        with self.assertRaises(ValidationError):
            GeneratorSpec(family="er", n=10, p=0.5, seed=-1)


class TestGeneratorRegistry(TestCase):
    """Test cases for the handler registry."""

    def test_builtin_families(self):
        """Test that the four families are registered."""
        self.assertEqual(set(GENERATOR_HANDLERS), {"er", "ws", "ba", "pl"})
        self.assertIsInstance(get_generator_handler("ER"), ErdosRenyiHandler)

    def test_unknown_family(self):
        """Test that unknown families raise GeneratorError."""
        with self.assertRaises(GeneratorError):
            get_generator_handler("ring-of-fire")
        with self.assertRaises(ConfigError):
            generate_plex(GeneratorSpec(family="ring-of-fire", n=10, p=0.3, seed=1))

    def test_register_custom_family(self):
        """Test registering a new family."""
        register_generator("ring", RingHandler)
        self.addCleanup(GENERATOR_HANDLERS.pop, "ring")
        graph = generate_plex(GeneratorSpec(family="ring", n=6, p=0.5, seed=1))
        self.assertEqual(graph.edge_count, 6)


class TestGenerators(TestCase):
    """Test cases for single-plex generation."""

    def test_watts_strogatz_edge_count(self):
        """Test that rewiring keeps n * k / 2 edges."""
        graph = generate_plex(GeneratorSpec(family="ws", n=100, p=0.2, seed=3))
        self.assertEqual(graph.edge_count, 1000)

    def test_barabasi_albert_edge_count(self):
        """Test C(k, 2) + k * (n - k) edges."""
        graph = generate_plex(GeneratorSpec(family="ba", n=100, p=0.2, seed=3))
        self.assertEqual(graph.edge_count, 190 + 20 * 80)

    def test_powerlaw_cluster(self):
        """Test that the powerlaw-cluster family builds an n-node graph."""
        graph = generate_plex(GeneratorSpec(family="pl", n=50, p=0.1, seed=3))
        self.assertEqual(graph.n, 50)
        self.assertGreater(graph.edge_count, 0)

    def test_seed_determinism(self):
        """Test that equal seeds give equal graphs."""
        spec = GeneratorSpec(family="er", n=40, p=0.2, seed=99)
        self.assertEqual(generate_multiplex(spec, 2), generate_multiplex(spec, 2))
        other = GeneratorSpec(family="er", n=40, p=0.2, seed=100)
        self.assertNotEqual(dict(generate_plex(spec).edges), dict(generate_plex(other).edges))

    def test_plex_seeds(self):
        """Test that plex i uses its own derived seed."""
        self.assertNotEqual(derive_plex_seed(5, 0), derive_plex_seed(5, 1))
        self.assertEqual(derive_plex_seed(5, 1), derive_plex_seed(5, 1))

    def test_erdos_renyi_edge_count_is_binomial(self):
        """Test that the mean edge count over 200 seeds is within 3 sigma of p * C(n, 2)."""
        pairs = 100 * 99 // 2
        counts = [generate_plex(GeneratorSpec(family="er", n=100, p=0.2, seed=seed)).edge_count for seed in range(200)]
        sigma = math.sqrt(pairs * 0.2 * 0.8 / len(counts))
        self.assertAlmostEqual(float(np.mean(counts)), pairs * 0.2, delta=3 * sigma)

    def test_powerlaw_cluster_is_more_clustered_than_barabasi_albert(self):
        """Test mean clustering over 50 seeds at equal n and k."""

        def mean_clustering(family: str) -> float:
            specs = [GeneratorSpec(family=family, n=100, p=0.05, seed=seed) for seed in range(50)]
            return float(np.mean([nx.average_clustering(generate_plex(spec).to_networkx()) for spec in specs]))

        self.assertGreater(mean_clustering("pl"), mean_clustering("ba"))

    def test_watts_strogatz_without_rewiring_is_a_ring_lattice(self):
        """Test that beta = 0 links every node to its k / 2 nearest neighbors on each side."""
        n, k = 30, 6
        graph = generate_plex(GeneratorSpec(family="ws", n=n, p=0.2, seed=4, beta=0.0))
        lattice = {tuple(sorted((i, (i + step) % n))) for i in range(n) for step in range(1, k // 2 + 1)}
        self.assertEqual(set(graph.edges), lattice)


class TestGenerateMultiplex(TestCase):
    """Test cases for multiplex composition."""

    def test_single_plex_equals_generate_plex(self):
        """Test d=1."""
        spec = GeneratorSpec(family="ws", n=30, p=0.2, seed=8)
        self.assertEqual(generate_multiplex(spec, 1), generate_plex(spec))

    def test_first_plex_matches_single_plex(self):
        """Test that plex 0 of a 3-plex network is the single-plex network."""
        spec = GeneratorSpec(family="er", n=30, p=0.2, seed=8)
        multiplex = generate_multiplex(spec, 3)
        self.assertEqual(multiplex.d, 3)
        first = extract_kplex(multiplex, PlexSelection((0,)))
        self.assertEqual(dict(first.edges), dict(generate_plex(spec).edges))

    def test_invalid_plex_count(self):
        """Test d < 1."""
        with self.assertRaises(GeneratorError):
            generate_multiplex(GeneratorSpec(family="er", n=10, p=0.2, seed=1), 0)

    def test_two_plex_overlap_fraction(self):
        """Test that about p / (2 - p) of the present pairs carry both labels (1/3 at p = 0.5)."""
        both = present = 0
        for seed in range(20):
            graph = generate_multiplex(GeneratorSpec(family="er", n=100, p=0.5, seed=seed), 2)
            present += graph.edge_count
            both += sum(label == 0b11 for label in graph.edges.values())
        expected = 0.5 / 1.5
        sigma = math.sqrt(expected * (1 - expected) / present)
        self.assertAlmostEqual(both / present, expected, delta=3 * sigma)


class TestBenchmarkGrid(TestCase):
    """Test cases for the benchmark grid."""

    def test_default_grid_size(self):
        """Test 4 families x 5 sizes x 5 probabilities x 20 replicates."""
        specs = benchmark_grid(seed=1)
        self.assertEqual(len(specs), 2000)
        self.assertEqual(len({spec.seed for spec in specs}), 2000)

    def test_grid_is_seeded(self):
        """Test grid determinism."""
        small = {"families": ("er", "ba"), "sizes": (20,), "probabilities": (0.2, 0.5), "replicates": 3}
        self.assertEqual(benchmark_grid(seed=4, **small), benchmark_grid(seed=4, **small))
        self.assertNotEqual(benchmark_grid(seed=4, **small), benchmark_grid(seed=5, **small))

    def test_write_benchmark_grid(self):
        """Test edge files and the manifest."""
        specs = benchmark_grid(seed=2, families=("er",), sizes=(20,), probabilities=(0.2,), replicates=2)
        with tempfile.TemporaryDirectory() as tmp:
            manifest_path = write_benchmark_grid(tmp, specs, d=2, workers=2)
            self.assertEqual(manifest_path.name, MANIFEST_NAME)
            manifest = json.loads(manifest_path.read_text())
            self.assertEqual(manifest["kind"], "benchmark-grid")
            self.assertEqual(
                [entry["file"] for entry in manifest["networks"]],
                ["er_n20_p0.2_r00.edges", "er_n20_p0.2_r01.edges"],
            )
            graph = read_multiplex(Path(tmp) / "er_n20_p0.2_r00.edges")
            self.assertEqual(graph.d, 2)
            self.assertEqual(graph, generate_multiplex(specs[0], 2))
