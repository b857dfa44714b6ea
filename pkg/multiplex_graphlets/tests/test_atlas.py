"""Tests for the graphlet atlas: orbits, classification and canonical sub-orbits."""

from itertools import combinations, permutations
from unittest import TestCase

import numpy as np

from multiplex_graphlets.atlas import (
    ORBIT_COUNT,
    ORBITS,
    SubOrbitId,
    burnside_class_count,
    canonical_suborbit,
    classification_table,
    classify_graphlet,
    get_orbit,
    global_columns,
    orbit_table,
    orbits_up_to,
    suborbit_space,
    suborbit_space_size,
)
from multiplex_graphlets.helpers.common.enums import Taxonomy
from multiplex_graphlets.helpers.common.exceptions import GraphletError
from multiplex_graphlets.labels import parse_label

ABC = ("a", "b", "c")


def adjacency(n: int, edges: list[tuple[int, int]]) -> np.ndarray:
    """Boolean adjacency matrix."""
    matrix = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        matrix[u, v] = matrix[v, u] = True
    return matrix


def labels(*texts: str) -> list[int]:
    """Parse labels over plexes a, b, c."""
    return [parse_label(text, ABC) for text in texts]


class TestOrbits(TestCase):
    """Test cases for the static orbit catalogue."""

    def test_fifteen_orbits(self):
        """Test that orbit ids are 0..14 in order."""
        self.assertEqual(ORBIT_COUNT, 15)
        self.assertEqual([orbit.id for orbit in ORBITS], list(range(15)))

    def test_stabilizer_orders(self):
        """Test the size of each orbit's stabilizer."""
        expected = [1, 1, 2, 2, 1, 1, 2, 6, 2, 2, 2, 1, 2, 2, 6]
        self.assertEqual([len(orbit.stabilizer) for orbit in ORBITS], expected)

    def test_nodes_per_instance(self):
        """Test that orbit multiplicities add up to the graphlet sizes."""
        by_graphlet: dict[int, int] = {}
        for orbit in ORBITS:
            by_graphlet[orbit.graphlet] = by_graphlet.get(orbit.graphlet, 0) + orbit.multiplicity
        self.assertEqual(by_graphlet, {0: 2, 1: 3, 2: 3, 3: 4, 4: 4, 5: 4, 6: 4, 7: 4, 8: 4})

    def test_slot_counts(self):
        """Test that every orbit has one slot per graphlet edge."""
        self.assertEqual([orbit.slot_count for orbit in ORBITS], [1, 2, 2, 3, 3, 3, 3, 3, 4, 4, 4, 4, 5, 5, 6])

    def test_incident_slots_first(self):
        """Test that slots start with the edges at the root."""
        for orbit in ORBITS:
            degree = sum(orbit.root in slot for slot in orbit.slots)
            with self.subTest(orbit=orbit.id):
                self.assertTrue(all(orbit.root in slot for slot in orbit.slots[:degree]))

    def test_get_orbit(self):
        """Test lookup and range checks."""
        self.assertEqual(get_orbit(3).alias, "triangle")
        self.assertIs(get_orbit(ORBITS[5]), ORBITS[5])
        with self.assertRaises(GraphletError):
            get_orbit(15)

    def test_orbits_up_to(self):
        """Test size filtering."""
        self.assertEqual([orbit.id for orbit in orbits_up_to(2)], [0])
        self.assertEqual([orbit.id for orbit in orbits_up_to(3)], [0, 1, 2, 3])
        self.assertEqual(len(orbits_up_to(4)), 15)
        with self.assertRaises(GraphletError):
            orbits_up_to(5)

    def test_orbit_table(self):
        """Test the descriptive orbit table."""
        table = orbit_table()
        self.assertEqual(len(table), 15)
        self.assertEqual(table[14]["graphlet_name"], "4-clique")
        self.assertEqual(table[14]["stabilizer_order"], 6)
        self.assertEqual(table[0]["slots"], ["0-1"])


class TestClassifyGraphlet(TestCase):
    """Test cases for classify_graphlet."""

    def test_wedge(self):
        """Test that the wedge center is orbit 2 and the ends orbit 1."""
        result = classify_graphlet(adjacency(3, [(0, 1), (1, 2)]))
        self.assertEqual(result.graphlet, 1)
        self.assertEqual(result.orbits, (1, 2, 1))

    def test_four_node_graphlets(self):
        """Test orbits of every 4-node graphlet."""
        cases = {
            "path": ([(0, 1), (1, 2), (2, 3)], 3, (4, 5, 5, 4)),
            "star": ([(0, 1), (0, 2), (0, 3)], 4, (7, 6, 6, 6)),
            "cycle": ([(0, 1), (1, 2), (2, 3), (0, 3)], 5, (8, 8, 8, 8)),
            "tailed triangle": ([(0, 1), (0, 2), (1, 2), (2, 3)], 6, (11, 11, 10, 9)),
            "chordal cycle": ([(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)], 7, (12, 13, 13, 12)),
            "clique": (list(combinations(range(4), 2)), 8, (14, 14, 14, 14)),
        }
        for name, (edges, graphlet, orbits) in cases.items():
            with self.subTest(name=name):
                result = classify_graphlet(adjacency(4, edges))
                self.assertEqual(result.graphlet, graphlet)
                self.assertEqual(result.orbits, orbits)

    def test_slots_are_instance_edges(self):
        """Test that every slot maps to an edge of the instance."""
        edges = [(0, 1), (0, 2), (1, 2), (2, 3)]
        result = classify_graphlet(adjacency(4, edges))
        for node_slots in result.slots:
            self.assertEqual(sorted(node_slots), sorted(edges))

    def test_rejects_disconnected(self):
        """Test that disconnected graphs raise."""
        with self.assertRaises(GraphletError):
            classify_graphlet(adjacency(4, [(0, 1), (2, 3)]))

    def test_rejects_bad_shapes(self):
        """Test size and symmetry checks."""
        with self.assertRaises(GraphletError):
            classify_graphlet(np.zeros((5, 5)))
        with self.assertRaises(GraphletError):
            classify_graphlet(np.zeros((2, 3)))
        with self.assertRaises(GraphletError):
            classify_graphlet(np.array([[0, 1], [0, 0]]))

    def test_classification_tables(self):
        """Test the number of connected labeled graphs on 2, 3 and 4 nodes."""
        self.assertEqual(len(classification_table(2)), 1)
        self.assertEqual(len(classification_table(3)), 4)
        self.assertEqual(len(classification_table(4)), 38)


class TestCanonicalSubOrbit(TestCase):
    """Test cases for canonical sub-orbits."""

    def test_wedge_path(self):
        """Test an end node reading its own edge first."""
        self.assertEqual(canonical_suborbit(1, labels("b", "c")).render(ABC), "1:b.c")

    def test_triangle(self):
        """Test a triangle node with two ab edges and an opposite b edge."""
        self.assertEqual(canonical_suborbit(3, labels("ab", "ab", "b")).render(ABC), "3:ab.ab.b")
        self.assertEqual(canonical_suborbit(3, labels("b", "ab", "a")).render(ABC), "3:b.ab.a")

    def test_symmetric_pair_is_sorted(self):
        """Test that a count-1 label precedes a count-2 label."""
        self.assertEqual(canonical_suborbit(2, labels("ac", "b")).render(ABC), "2:b.ac")

    def test_clique_constant(self):
        """Test a constant labeling of the four clique."""
        self.assertEqual(canonical_suborbit(14, labels(*"aaaaaa")).render(ABC), "14:a.a.a.a.a.a")

    def test_wrong_length(self):
        """Test that the label count must match the slot count."""
        with self.assertRaises(GraphletError):
            canonical_suborbit(3, labels("a", "b"))

    def test_empty_label(self):
        """Test that labels must be non-empty."""
        with self.assertRaises(GraphletError):
            canonical_suborbit(0, [0])

    def test_invariant_under_relabeling(self):
        """Test that every node keeps its sub-orbit under all node permutations."""
        cases = [
            (3, {(0, 1): "ab", (0, 2): "b", (1, 2): "abc"}),
            (4, {(0, 1): "a", (0, 2): "b", (1, 2): "c", (2, 3): "ab"}),
            (4, {(0, 1): "a", (0, 2): "bc", (1, 2): "c", (1, 3): "ab", (2, 3): "b"}),
            (4, {(0, 1): "a", (1, 2): "b", (2, 3): "a", (0, 3): "c"}),
            (4, {pair: text for pair, text in zip(combinations(range(4), 2), ["a", "b", "c", "ab", "ac", "b"])}),
        ]
        for n, labeled in cases:
            edge_labels = {pair: parse_label(text, ABC) for pair, text in labeled.items()}
            reference = classify_graphlet(adjacency(n, list(edge_labels)))
            expected = [
                canonical_suborbit(reference.orbits[v], [edge_labels[slot] for slot in reference.slots[v]])
                for v in range(n)
            ]
            for perm in permutations(range(n)):
                moved = {tuple(sorted((perm[u], perm[v]))): label for (u, v), label in edge_labels.items()}
                result = classify_graphlet(adjacency(n, list(moved)))
                for v in range(n):
                    slots = result.slots[perm[v]]
                    suborbit = canonical_suborbit(result.orbits[perm[v]], [moved[slot] for slot in slots])
                    with self.subTest(n=n, perm=perm, node=v):
                        self.assertEqual(suborbit, expected[v])


class TestSubOrbitSpaces(TestCase):
    """Test cases for sub-orbit space enumeration and sizes."""

    def test_degree_space(self):
        """Test the seven degree sub-orbits of a 3-plex network."""
        rendered = [suborbit.render(ABC) for suborbit in suborbit_space(0, 3)]
        self.assertEqual(rendered, ["0:a", "0:b", "0:c", "0:ab", "0:ac", "0:bc", "0:abc"])

    def test_three_plex_sizes(self):
        """Test the sizes for orbits 0-3 at d=3."""
        self.assertEqual([len(suborbit_space(orbit, 3)) for orbit in range(4)], [7, 49, 28, 196])

    def test_spaces_match_closed_forms(self):
        """Test enumerated spaces against closed forms for every orbit at d=2."""
        for orbit in range(ORBIT_COUNT):
            with self.subTest(orbit=orbit):
                self.assertEqual(len(suborbit_space(orbit, 2)), suborbit_space_size(orbit, 3))

    def test_closed_forms_match_class_counts(self):
        """Test closed forms against the stabilizer class count."""
        for m in (1, 3, 7, 15):
            for orbit in range(ORBIT_COUNT):
                with self.subTest(orbit=orbit, m=m):
                    self.assertEqual(suborbit_space_size(orbit, m), burnside_class_count(orbit, m))

    def test_size_examples(self):
        """Test individual closed-form values."""
        self.assertEqual(suborbit_space_size(2, 7), 28)
        self.assertEqual(suborbit_space_size(8, 3), 45)

    def test_four_clique_classes(self):
        """Test the 165 classes of the four clique at three labels."""
        self.assertEqual(suborbit_space_size(14, 3), 165)
        self.assertEqual(len(suborbit_space(14, 2)), 165)
        self.assertNotEqual(suborbit_space_size(14, 3), 3**5)

    def test_space_is_sorted_and_canonical(self):
        """Test column order and canonical members."""
        space = suborbit_space(6, 2)
        self.assertEqual(space, sorted(space, key=SubOrbitId.sort_key))
        for suborbit in space:
            self.assertEqual(canonical_suborbit(6, suborbit.labels), suborbit)

    def test_global_columns(self):
        """Test the signature schema sizes."""
        self.assertEqual(len(global_columns(3, 3, Taxonomy.FULL)), 7 + 49 + 28 + 196)
        self.assertEqual(len(global_columns(2, 3, Taxonomy.DISTINCT)), 22)
        self.assertEqual(len(global_columns(1, 4, Taxonomy.FULL)), 15)

    def test_reduced_space_rejects_four_node_orbits(self):
        """Test that reductions cover orbits 0-3 only."""
        with self.assertRaises(GraphletError):
            suborbit_space(4, 2, Taxonomy.PLEXCOUNT)
