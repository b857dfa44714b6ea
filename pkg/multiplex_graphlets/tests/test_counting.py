"""Tests for graphlet degree counting."""

import os
import tempfile
import time
import unittest
from pathlib import Path
from unittest import TestCase

import networkx as nx
import numpy as np

from multiplex_graphlets.atlas import canonical_suborbit, orbits_up_to
from multiplex_graphlets.config import default_workers
from multiplex_graphlets.counting import (
    GraphletDegreeMatrix,
    brute_force_counts,
    count_graphlets,
    read_degree_matrix,
    write_degree_matrix,
)
from multiplex_graphlets.generators import GeneratorSpec, generate_multiplex
from multiplex_graphlets.helpers.common.enums import Taxonomy
from multiplex_graphlets.helpers.common.exceptions import ConfigError, GraphletError, InputError, ParseError
from multiplex_graphlets.multiplex import MultiplexGraph, flatten
from multiplex_graphlets.tests.factories import MultiplexFactory, permute_label

DENSITIES = (0.15, 0.3, 0.5, 0.8)
SLOW_TESTS = "MULTIPLEX_GRAPHLETS_SLOW_TESTS"


def row(matrix: GraphletDegreeMatrix, node: int) -> dict[str, int]:
    """Non-zero entries of one node's signature, keyed by sub-orbit id."""
    return {label: int(value) for label, value in zip(matrix.labels, matrix.counts[node]) if value}


class TestCountGraphlets(TestCase):
    """Test cases for count_graphlets on hand-checked graphs."""

    def test_triangle(self):
        """Test K3: two edges and one triangle per node, no induced wedges."""
        matrix = count_graphlets(MultiplexFactory.complete(3), max_size=3)
        self.assertEqual(matrix.labels, ("0:a", "1:a.a", "2:a.a", "3:a.a.a"))
        for node in range(3):
            self.assertEqual(row(matrix, node), {"0:a": 2, "3:a.a.a": 1})

    def test_path(self):
        """Test the path 0-1-2."""
        matrix = count_graphlets(MultiplexFactory.path(3), max_size=3)
        self.assertEqual(row(matrix, 1), {"0:a": 2, "2:a.a": 1})
        self.assertEqual(row(matrix, 0), {"0:a": 1, "1:a.a": 1})
        self.assertEqual(row(matrix, 2), {"0:a": 1, "1:a.a": 1})

    def test_four_clique(self):
        """Test K4 with four-node graphlets."""
        matrix = count_graphlets(MultiplexFactory.complete(4), max_size=4)
        for node in range(4):
            self.assertEqual(row(matrix, node), {"0:a": 3, "3:a.a.a": 3, "14:a.a.a.a.a.a": 1})

    def test_four_cycle(self):
        """Test C4: every node is in one four cycle and two wedges as an end."""
        graph = MultiplexGraph(4, ("a",), {(0, 1): 1, (1, 2): 1, (2, 3): 1, (0, 3): 1})
        matrix = count_graphlets(graph, max_size=4)
        for node in range(4):
            self.assertEqual(row(matrix, node), {"0:a": 2, "1:a.a": 2, "2:a.a": 1, "8:a.a.a.a": 1})

    def test_worked_example_degrees(self):
        """Test the degree sub-orbits of node 3."""
        graph = MultiplexFactory.worked_example()
        matrix = count_graphlets(graph, max_size=3)
        counts = row(matrix, MultiplexFactory.node(graph, "3"))
        self.assertEqual(
            {label: value for label, value in counts.items() if label.startswith("0:")},
            {"0:ab": 2, "0:b": 1, "0:ac": 1, "0:bc": 1},
        )

    def test_worked_example_wedge_paths(self):
        """Test the wedge-path end sub-orbits of node 2."""
        graph = MultiplexFactory.worked_example()
        matrix = count_graphlets(graph, max_size=3)
        counts = row(matrix, MultiplexFactory.node(graph, "2"))
        self.assertEqual(
            {label: value for label, value in counts.items() if label.startswith("1:")},
            {"1:b.ac": 1, "1:b.ab": 1, "1:b.c": 1, "1:b.b": 1},
        )

    def test_worked_example_triangles(self):
        """Test that the four triangles credit twelve node incidences."""
        graph = MultiplexFactory.worked_example()
        self.assertEqual(int(count_graphlets(graph, max_size=3).orbit_totals()[3].sum()), 12)
        self.assertEqual(int(count_graphlets(flatten(graph), max_size=3).orbit_totals()[3].sum()), 12)

    def test_orbit_totals_match_flattened(self):
        """Test that summing sub-orbits gives the single-plex orbit counts."""
        graph = MultiplexFactory.random(12, 3, 0.4, seed=3)
        layered = count_graphlets(graph, max_size=4).orbit_totals()
        flat = count_graphlets(flatten(graph), max_size=4).orbit_totals()
        for orbit in range(15):
            with self.subTest(orbit=orbit):
                np.testing.assert_array_equal(layered[orbit], flat[orbit])

    def test_no_edges(self):
        """Test a graph without edges."""
        matrix = count_graphlets(MultiplexGraph(5, ("a", "b"), {}), max_size=3, space=Taxonomy.DISTINCT)
        self.assertEqual(matrix.shape, (5, 22))
        self.assertFalse(matrix.counts.any())

    def test_reduced_spaces(self):
        """Test the wedge-star collapse in the plexcount and distinct spaces."""
        labels = [0b011, 0b101]  # ab, ac
        graph = MultiplexFactory.path(3, labels=labels, d=3)
        plexcount = count_graphlets(graph, max_size=3, space=Taxonomy.PLEXCOUNT)
        distinct = count_graphlets(graph, max_size=3, space=Taxonomy.DISTINCT)
        self.assertEqual(row(plexcount, 1), {"0:2": 2, "2:2.2": 1})
        self.assertEqual(row(distinct, 1), {"0:2_x": 2, "2:2_x.2_y": 1})

    def test_counts_are_read_only(self):
        """Test that results are immutable."""
        matrix = count_graphlets(MultiplexFactory.complete(3))
        with self.assertRaises(ValueError):
            matrix.counts[0, 0] = 5

    def test_invalid_scope(self):
        """Test size, space and worker checks."""
        graph = MultiplexFactory.complete(3)
        with self.assertRaises(ConfigError):
            count_graphlets(graph, max_size=5)
        with self.assertRaises(ConfigError):
            count_graphlets(graph, max_size=4, space=Taxonomy.DISTINCT)
        with self.assertRaises(ConfigError):
            count_graphlets(graph, workers=0)

    def test_worker_count_does_not_change_counts(self):
        """Test that the process pool merges to the sequential result for 1, 2 and 8 workers."""
        graph = MultiplexFactory.random(30, 2, 0.2, seed=11)
        sequential = count_graphlets(graph, max_size=4)
        for workers in (2, 8):
            with self.subTest(workers=workers):
                self.assertTrue(sequential.equals(count_graphlets(graph, max_size=4, workers=workers)))
        distinct = count_graphlets(graph, max_size=3, space=Taxonomy.DISTINCT)
        self.assertTrue(distinct.equals(count_graphlets(graph, max_size=3, space=Taxonomy.DISTINCT, workers=8)))


class TestSymmetries(TestCase):
    """Test cases for node relabeling, plex permutation and orbit multiplicities."""

    def setUp(self):
        """Set up a random three-plex graph and permutations of its nodes and plexes."""
        self.graph = MultiplexFactory.random(14, 3, 0.35, seed=21)
        self.node_order = [int(i) for i in np.random.default_rng(5).permutation(self.graph.n)]
        self.plex_order = (2, 0, 1)

    def test_node_relabeling_permutes_rows(self):
        """Test that relabeling nodes only reorders the signature rows."""
        relabeled = MultiplexFactory.relabel_nodes(self.graph, self.node_order)
        for space, max_size in ((Taxonomy.FULL, 4), (Taxonomy.PLEXCOUNT, 3), (Taxonomy.DISTINCT, 3)):
            with self.subTest(space=space):
                original = count_graphlets(self.graph, max_size=max_size, space=space)
                moved = count_graphlets(relabeled, max_size=max_size, space=space)
                self.assertEqual(moved.columns, original.columns)
                np.testing.assert_array_equal(moved.counts[self.node_order], original.counts)

    def test_plex_permutation_permutes_full_space_columns(self):
        """Test that permuting plexes maps every full-space column onto its permuted sub-orbit."""
        original = count_graphlets(self.graph, max_size=4)
        permuted = count_graphlets(MultiplexFactory.permute_plexes(self.graph, self.plex_order), max_size=4)
        index = permuted.column_index
        targets = set()
        for position, column in enumerate(original.columns):
            labels = [permute_label(label, self.plex_order) for label in column.labels]
            target = canonical_suborbit(column.orbit, labels)
            targets.add(target)
            np.testing.assert_array_equal(permuted.counts[:, index[target]], original.counts[:, position])
        self.assertEqual(len(targets), len(original.columns))

    def test_plex_permutation_leaves_plexcount_space_unchanged(self):
        """Test plexcount matrices of plex-permuted copies."""
        original = count_graphlets(self.graph, max_size=3, space=Taxonomy.PLEXCOUNT)
        for order in ((1, 0, 2), (2, 0, 1), (2, 1, 0)):
            permuted = MultiplexFactory.permute_plexes(self.graph, order)
            with self.subTest(order=order):
                self.assertTrue(count_graphlets(permuted, max_size=3, space=Taxonomy.PLEXCOUNT).equals(original))

    def test_distinct_triangle_letters_follow_label_order(self):
        """Test the triangle whose distinct id changes when plexes a and c swap.

        Distinct letters are assigned in label order, so (ab, ac | ab) and its
        a/c mirror (bc, ac | bc) both have three two-plex edges but differ in
        which incident edge repeats on the opposite side after sorting.
        """
        graph = MultiplexGraph(3, ("a", "b", "c"), {(0, 1): 0b011, (0, 2): 0b101, (1, 2): 0b011})
        mirrored = MultiplexFactory.permute_plexes(graph, (2, 1, 0))
        self.assertEqual(dict(mirrored.edges), {(0, 1): 0b110, (0, 2): 0b101, (1, 2): 0b110})

        def triangle_ids(target: MultiplexGraph, space: Taxonomy) -> dict[str, int]:
            counts = row(count_graphlets(target, max_size=3, space=space), 0)
            return {label: value for label, value in counts.items() if label.startswith("3:")}

        self.assertEqual(triangle_ids(graph, Taxonomy.DISTINCT), {"3:2_x.2_y.2_x": 1})
        self.assertEqual(triangle_ids(mirrored, Taxonomy.DISTINCT), {"3:2_x.2_y.2_y": 1})
        self.assertEqual(triangle_ids(graph, Taxonomy.PLEXCOUNT), {"3:2.2.2": 1})
        self.assertEqual(triangle_ids(mirrored, Taxonomy.PLEXCOUNT), {"3:2.2.2": 1})

    def test_orbit_totals_are_multiples_of_nodes_per_instance(self):
        """Test the orbit multiplicity identities and the graphlet counts they give."""
        matrix = count_graphlets(self.graph, max_size=4)
        totals = {orbit: int(values.sum()) for orbit, values in matrix.orbit_totals().items()}
        for orbit in orbits_up_to(4):
            with self.subTest(orbit=orbit.id):
                self.assertEqual(totals[orbit.id] % orbit.multiplicity, 0)
        self.assertEqual(totals[1], 2 * totals[2])
        self.assertEqual(totals[4], totals[5])
        self.assertEqual(totals[6], 3 * totals[7])
        self.assertEqual(totals[9], totals[10])
        self.assertEqual(totals[11], 2 * totals[9])
        self.assertEqual(totals[12], totals[13])

        instances = matrix.graphlet_counts()
        flat = self.graph.to_networkx()
        self.assertEqual(instances[0], flat.number_of_edges())
        self.assertEqual(instances[2], sum(nx.triangles(flat).values()) // 3)
        self.assertEqual(instances[8], sum(1 for clique in nx.enumerate_all_cliques(flat) if len(clique) == 4))

    def test_graphlet_counts_rejects_inconsistent_totals(self):
        """Test an orbit total that is not a multiple of its nodes per instance."""
        matrix = count_graphlets(MultiplexFactory.complete(3))
        counts = matrix.counts.copy()
        counts[0, matrix.labels.index("3:a.a.a")] = 0
        broken = GraphletDegreeMatrix(
            counts, matrix.columns, matrix.node_names, matrix.plex_names, matrix.space, matrix.max_size
        )
        with self.assertRaises(GraphletError):
            broken.graphlet_counts()


class TestOracleEquivalence(TestCase):
    """Test cases comparing count_graphlets with brute_force_counts."""

    def test_three_node_graphlets_all_spaces(self):
        """Test random multiplexes up to size 3 in every space."""
        for space in Taxonomy:
            for d in (1, 2, 3):
                for density in DENSITIES:
                    for seed in range(3):
                        graph = MultiplexFactory.random(8 + 2 * seed, d, density, seed=seed + 100 * d)
                        with self.subTest(space=space, d=d, density=density, seed=seed):
                            expected = brute_force_counts(graph, max_size=3, space=space)
                            self.assertTrue(count_graphlets(graph, max_size=3, space=space).equals(expected))

    def test_four_node_graphlets(self):
        """Test 108 random multiplexes of 8 to 24 nodes up to size 4 in the full space."""
        for d in (1, 2, 3):
            for density in (0.1, 0.2, 0.35, 0.5):
                for seed in range(9):
                    graph = MultiplexFactory.random(8 + 2 * seed, d, density, seed=seed + 10 * d)
                    with self.subTest(d=d, density=density, seed=seed):
                        expected = brute_force_counts(graph, max_size=4)
                        self.assertTrue(count_graphlets(graph, max_size=4).equals(expected))


class TestDegreeMatrixIO(TestCase):
    """Test cases for degree matrix CSV files."""

    def test_full_space_round_trip(self):
        """Test write then read in the full space."""
        graph = MultiplexFactory.worked_example()
        matrix = count_graphlets(graph, max_size=3)
        with tempfile.TemporaryDirectory() as tmp:
            path = write_degree_matrix(matrix, Path(tmp) / "counts.csv")
            self.assertTrue(read_degree_matrix(path, Taxonomy.FULL, plex_names=graph.plex_names).equals(matrix))

    def test_distinct_space_round_trip(self):
        """Test write then read in the distinct space."""
        matrix = count_graphlets(MultiplexFactory.worked_example(), max_size=3, space=Taxonomy.DISTINCT)
        with tempfile.TemporaryDirectory() as tmp:
            path = write_degree_matrix(matrix, Path(tmp) / "counts.csv")
            self.assertTrue(read_degree_matrix(path, Taxonomy.DISTINCT, d=3).equals(matrix))

    def test_header(self):
        """Test the CSV header."""
        matrix = count_graphlets(MultiplexFactory.complete(3))
        with tempfile.TemporaryDirectory() as tmp:
            path = write_degree_matrix(matrix, Path(tmp) / "counts.csv")
            self.assertEqual(path.read_text().splitlines()[0], "node,0:a,1:a.a,2:a.a,3:a.a.a")

    def test_read_requires_plex_context(self):
        """Test that reading needs plex names or d."""
        with self.assertRaises(InputError):
            read_degree_matrix("unused.csv", Taxonomy.FULL)

    def test_read_rejects_non_numeric_cells(self):
        """Test that a non-numeric count is a parse error naming the file."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "counts.csv"
            path.write_text("node,0:a\n0,1\n1,two\n")
            with self.assertRaisesRegex(ParseError, "counts.csv"):
                read_degree_matrix(path, Taxonomy.FULL, plex_names=["a"])

    def test_read_rejects_empty_file(self):
        """Test that an empty file is a parse error."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "counts.csv"
            path.write_text("")
            with self.assertRaises(ParseError):
                read_degree_matrix(path, Taxonomy.FULL, plex_names=["a"])


@unittest.skipUnless(os.environ.get(SLOW_TESTS), f"set {SLOW_TESTS}=1 to run timing checks")
class TestPerformanceFloor(TestCase):
    """Timing checks on generated two-plex ER networks with the default worker count."""

    def test_full_space_four_nodes(self):
        """Test N=100, p=0.2, max size 4 in the full space within 60 s."""
        graph = generate_multiplex(GeneratorSpec(family="er", n=100, p=0.2, seed=1), 2)
        start = time.perf_counter()
        count_graphlets(graph, max_size=4, space=Taxonomy.FULL, workers=default_workers())
        self.assertLess(time.perf_counter() - start, 60.0)

    def test_distinct_space_three_nodes(self):
        """Test N=500, p=0.2, max size 3 in the distinct space within 120 s."""
        graph = generate_multiplex(GeneratorSpec(family="er", n=500, p=0.2, seed=1), 2)
        start = time.perf_counter()
        count_graphlets(graph, max_size=3, space=Taxonomy.DISTINCT, workers=default_workers())
        self.assertLess(time.perf_counter() - start, 120.0)
