"""Static taxonomy of the 9 graphlets on 2-4 nodes and their 15 orbits.

Each orbit fixes an ordered list of edge *slots*. Slots come from a BFS over a
fixed template graph rooted at the orbit node: neighbors are visited in ascending
template order, incident edges are listed first, then edges among the root's
neighbors, then the remaining edges by BFS rank. The orbit's *stabilizer* is the
group of template automorphisms fixing the root, acting on slot positions.

A sub-orbit is the orbit plus the edge labels read in slot order, canonicalized to
the lexicographic minimum over the stabilizer. Graphlet instances are mapped onto
the template by an isomorphism sending the template root to the instance node;
two such isomorphisms differ by a stabilizer element, so canonical ids agree for
every node relabeling.
"""

import logging
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Any

import numpy as np

from multiplex_graphlets.helpers.common.enums import Taxonomy
from multiplex_graphlets.helpers.common.exceptions import GraphletError
from multiplex_graphlets.labels import EdgeLabel, all_labels, label_key

logger = logging.getLogger(__name__)

Pair = tuple[int, int]

GRAPHLET_NAMES: dict[int, str] = {
    0: "edge",
    1: "wedge",
    2: "triangle",
    3: "4-path",
    4: "3-star",
    5: "4-cycle",
    6: "tailed triangle",
    7: "chordal cycle",
    8: "4-clique",
}

# Template graphs: (node count, edges).
_TEMPLATES: dict[int, tuple[int, tuple[Pair, ...]]] = {
    0: (2, ((0, 1),)),
    1: (3, ((0, 1), (1, 2))),
    2: (3, ((0, 1), (0, 2), (1, 2))),
    3: (4, ((0, 1), (1, 2), (2, 3))),
    4: (4, ((0, 1), (0, 2), (0, 3))),
    5: (4, ((0, 1), (1, 2), (2, 3), (0, 3))),
    6: (4, ((0, 1), (0, 2), (1, 2), (2, 3))),
    7: (4, ((0, 1), (0, 2), (1, 2), (1, 3), (2, 3))),
    8: (4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))),
}

# (node count, edge count, sorted degree sequence) identifies every connected graph on <= 4 nodes.
_GRAPHLET_BY_SIGNATURE: dict[tuple[int, int, tuple[int, ...]], int] = {
    (2, 1, (1, 1)): 0,
    (3, 2, (1, 1, 2)): 1,
    (3, 3, (2, 2, 2)): 2,
    (4, 3, (1, 1, 2, 2)): 3,
    (4, 3, (1, 1, 1, 3)): 4,
    (4, 4, (2, 2, 2, 2)): 5,
    (4, 4, (1, 2, 2, 3)): 6,
    (4, 5, (2, 2, 3, 3)): 7,
    (4, 6, (3, 3, 3, 3)): 8,
}

# Within a graphlet, a node's orbit is determined by its degree.
_ORBIT_BY_DEGREE: dict[tuple[int, int], int] = {
    (0, 1): 0,
    (1, 1): 1,
    (1, 2): 2,
    (2, 2): 3,
    (3, 1): 4,
    (3, 2): 5,
    (4, 1): 6,
    (4, 3): 7,
    (5, 2): 8,
    (6, 1): 9,
    (6, 3): 10,
    (6, 2): 11,
    (7, 2): 12,
    (7, 3): 13,
    (8, 3): 14,
}

ORBIT_ALIASES: dict[int, str] = {
    0: "degree",
    1: "wedge path",
    2: "wedge star",
    3: "triangle",
    4: "four path end",
    5: "four path inner",
    6: "three star leaf",
    7: "three star center",
    8: "four cycle",
    9: "tailed triangle tail",
    10: "tailed triangle center",
    11: "tailed triangle side",
    12: "chordal cycle rim",
    13: "chordal cycle hub",
    14: "four clique",
}

ORBIT_COUNT = 15
REDUCIBLE_ORBITS = (0, 1, 2, 3)


@dataclass(frozen=True)
class Orbit:
    """One automorphism orbit with its slot convention and stabilizer."""

    id: int
    graphlet: int
    alias: str
    root: int
    slots: tuple[Pair, ...]
    stabilizer: tuple[tuple[int, ...], ...]
    multiplicity: int

    @property
    def slot_count(self) -> int:
        """Number of edge slots (edges of the owning graphlet)."""
        return len(self.slots)

    @property
    def size(self) -> int:
        """Node count of the owning graphlet."""
        return _TEMPLATES[self.graphlet][0]


@dataclass(frozen=True)
class SubOrbitId:
    """Canonical identifier of a sub-orbit in one taxonomy space.

    ``labels`` holds edge-label bit sets in the full space and reduced integer
    labels in the plexcount and distinct spaces.
    """

    orbit: int
    labels: tuple[int, ...]
    space: Taxonomy = Taxonomy.FULL

    def sort_key(self) -> tuple:
        """Global column order: orbit first, then the labels in the space's order."""
        if self.space == Taxonomy.FULL:
            return (self.orbit, tuple(label_key(label) for label in self.labels))
        return (self.orbit, self.labels)

    def render(self, plex_names: Sequence[str] | None = None, d: int | None = None) -> str:
        """String id such as ``3:ab.ab.b``; see :func:`multiplex_graphlets.reduction.render_suborbit`."""
        from multiplex_graphlets.reduction import render_suborbit  # pylint: disable=import-outside-toplevel

        return render_suborbit(self, plex_names=plex_names, d=d)


@dataclass(frozen=True)
class ClassifiedGraphlet:
    """Result of classifying a small connected graph."""

    graphlet: int
    orbits: tuple[int, ...]
    slots: tuple[tuple[Pair, ...], ...]


# ---------------------------------------------------------------------------
# Atlas construction
# ---------------------------------------------------------------------------


def _neighbor_sets(n: int, edges: Iterable[Pair]) -> list[set[int]]:
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        neighbors[u].add(v)
        neighbors[v].add(u)
    return neighbors


def _bfs_slot_edges(n: int, edges: Sequence[Pair], root: int) -> tuple[Pair, ...]:
    """Order edges by the BFS slot convention from ``root``."""
    neighbors = _neighbor_sets(n, edges)
    rank = {root: 0}
    layer_of = {root: 0}
    frontier = [root]
    layer = 0
    while frontier:
        layer += 1
        following = sorted({w for u in frontier for w in neighbors[u] if w not in rank})
        for w in following:
            rank[w] = len(rank)
            layer_of[w] = layer
        frontier = following

    def key(edge: Pair) -> tuple[int, int, int]:
        ra, rb = sorted((rank[edge[0]], rank[edge[1]]))
        if ra == 0:
            group = 0
        elif layer_of[edge[0]] == layer_of[edge[1]] == 1:
            group = 1
        else:
            group = 2
        return (group, ra, rb)

    return tuple(tuple(sorted(edge)) for edge in sorted(edges, key=key))


def _automorphisms(n: int, edges: Sequence[Pair]) -> list[tuple[int, ...]]:
    edge_set = {frozenset(edge) for edge in edges}
    return [
        perm
        for perm in permutations(range(n))
        if all(frozenset((perm[u], perm[v])) in edge_set for u, v in edges)
    ]


def _slot_permutation(perm: Sequence[int], slots: Sequence[Pair]) -> tuple[int, ...]:
    position = {frozenset(edge): index for index, edge in enumerate(slots)}
    return tuple(position[frozenset((perm[u], perm[v]))] for u, v in slots)


def _build_orbits() -> tuple[Orbit, ...]:
    orbits: dict[int, Orbit] = {}
    for graphlet, (n, edges) in _TEMPLATES.items():
        degree = [len(ns) for ns in _neighbor_sets(n, edges)]
        automorphisms = _automorphisms(n, edges)
        members: dict[int, list[int]] = {}
        for node in range(n):
            members.setdefault(_ORBIT_BY_DEGREE[(graphlet, degree[node])], []).append(node)
        for orbit_id, nodes in members.items():
            root = nodes[0]
            slots = _bfs_slot_edges(n, edges, root)
            stabilizer = sorted({_slot_permutation(perm, slots) for perm in automorphisms if perm[root] == root})
            orbits[orbit_id] = Orbit(
                id=orbit_id,
                graphlet=graphlet,
                alias=ORBIT_ALIASES[orbit_id],
                root=root,
                slots=slots,
                stabilizer=tuple(stabilizer),
                multiplicity=len(nodes),
            )
    return tuple(orbits[i] for i in range(ORBIT_COUNT))


ORBITS: tuple[Orbit, ...] = _build_orbits()


def get_orbit(orbit: int | Orbit) -> Orbit:
    """Look up an orbit by id.

    Raises:
        GraphletError: For ids outside 0..14.
    """
    if isinstance(orbit, Orbit):
        return orbit
    if not 0 <= orbit < ORBIT_COUNT:
        raise GraphletError(f"Orbit id must be in 0..{ORBIT_COUNT - 1}, got {orbit}")
    return ORBITS[orbit]


def orbits_up_to(max_size: int) -> tuple[Orbit, ...]:
    """Orbits of all graphlets with at most ``max_size`` nodes."""
    if not 2 <= max_size <= 4:
        raise GraphletError(f"Graphlet size must be 2, 3 or 4, got {max_size}")
    return tuple(orbit for orbit in ORBITS if orbit.size <= max_size)


def orbit_table() -> list[dict[str, Any]]:
    """Describe every orbit: graphlet, alias, slot edges and stabilizer order."""
    return [
        {
            "orbit": orbit.id,
            "graphlet": orbit.graphlet,
            "graphlet_name": GRAPHLET_NAMES[orbit.graphlet],
            "alias": orbit.alias,
            "slots": [f"{u}-{v}" for u, v in orbit.slots],
            "stabilizer_order": len(orbit.stabilizer),
            "nodes_per_instance": orbit.multiplicity,
        }
        for orbit in ORBITS
    ]


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def _is_connected(n: int, neighbors: Sequence[set[int]]) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        for w in neighbors[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def classify_graphlet(adjacency: Any) -> ClassifiedGraphlet:
    """Classify a connected graph on 2-4 nodes.

    Args:
        adjacency: Square symmetric 0/1 (or boolean) matrix without self-loops.

    Returns:
        The graphlet id, each node's orbit, and for each node the instance edges
        assigned to that orbit's slots.

    Raises:
        GraphletError: If the matrix is malformed, disconnected, or not on 2-4 nodes.
    """
    matrix = np.asarray(adjacency, dtype=bool)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise GraphletError(f"Adjacency must be a square matrix, got shape {matrix.shape}")
    n = matrix.shape[0]
    if not 2 <= n <= 4:
        raise GraphletError(f"Graphlets have 2-4 nodes, got {n}")
    if not np.array_equal(matrix, matrix.T) or matrix.diagonal().any():
        raise GraphletError("Adjacency must be symmetric without self-loops")

    edges = [(u, v) for u, v in combinations(range(n), 2) if matrix[u, v]]
    neighbors = _neighbor_sets(n, edges)
    if not _is_connected(n, neighbors):
        raise GraphletError("Graphlet adjacency is disconnected")

    degree = [len(ns) for ns in neighbors]
    graphlet = _GRAPHLET_BY_SIGNATURE[(n, len(edges), tuple(sorted(degree)))]
    _, template_edges = _TEMPLATES[graphlet]
    edge_set = {frozenset(edge) for edge in edges}

    orbit_ids = []
    slot_edges = []
    for node in range(n):
        orbit = ORBITS[_ORBIT_BY_DEGREE[(graphlet, degree[node])]]
        for perm in permutations(range(n)):
            if perm[orbit.root] == node and all(frozenset((perm[u], perm[v])) in edge_set for u, v in template_edges):
                break
        orbit_ids.append(orbit.id)
        slot_edges.append(tuple(tuple(sorted((perm[u], perm[v]))) for u, v in orbit.slots))
    return ClassifiedGraphlet(graphlet, tuple(orbit_ids), tuple(slot_edges))


@lru_cache(maxsize=4)
def classification_table(k: int) -> dict[int, ClassifiedGraphlet]:
    """Classification of every connected graph on ``k`` nodes, keyed by adjacency code.

    Bit ``b`` of a code is set when the ``b``-th pair of ``itertools.combinations(range(k), 2)`` is an edge.
    """
    pairs = list(combinations(range(k), 2))
    table: dict[int, ClassifiedGraphlet] = {}
    for code in range(1 << len(pairs)):
        matrix = np.zeros((k, k), dtype=bool)
        for bit, (u, v) in enumerate(pairs):
            if code >> bit & 1:
                matrix[u, v] = matrix[v, u] = True
        neighbors = _neighbor_sets(k, [pair for bit, pair in enumerate(pairs) if code >> bit & 1])
        if _is_connected(k, neighbors):
            table[code] = classify_graphlet(matrix)
    return table


# ---------------------------------------------------------------------------
# Canonical sub-orbits
# ---------------------------------------------------------------------------


def canonical_tuple(orbit: int | Orbit, values: Sequence[Any], key: Callable[[Any], Any] | None = None) -> tuple:
    """Lexicographic minimum of ``values`` over the orbit's stabilizer.

    Raises:
        GraphletError: If the tuple length differs from the orbit's slot count.
    """
    orbit = get_orbit(orbit)
    values = tuple(values)
    if len(values) != orbit.slot_count:
        raise GraphletError(f"Orbit {orbit.id} has {orbit.slot_count} slots, got {len(values)} labels")
    candidates = (tuple(values[i] for i in perm) for perm in orbit.stabilizer)
    if key is None:
        return min(candidates)
    return min(candidates, key=lambda candidate: tuple(key(value) for value in candidate))


@lru_cache(maxsize=262144)
def _canonical_full(orbit_id: int, labels: tuple[EdgeLabel, ...]) -> tuple[EdgeLabel, ...]:
    return canonical_tuple(orbit_id, labels, key=label_key)


def canonical_suborbit(orbit: int | Orbit, slot_labels: Sequence[EdgeLabel]) -> SubOrbitId:
    """Canonical full-space sub-orbit of an edge-label assignment."""
    orbit = get_orbit(orbit)
    labels = tuple(slot_labels)
    if len(labels) != orbit.slot_count:
        raise GraphletError(f"Orbit {orbit.id} has {orbit.slot_count} slots, got {len(labels)} labels")
    if any(label <= 0 for label in labels):
        raise GraphletError(f"Edge labels must be non-empty, got {labels}")
    return SubOrbitId(orbit.id, _canonical_full(orbit.id, labels), Taxonomy.FULL)


# ---------------------------------------------------------------------------
# Sub-orbit spaces
# ---------------------------------------------------------------------------


def canonical_representatives(orbit: Orbit, m: int) -> list[tuple[int, ...]]:
    """Canonical tuples over ranks ``0..m-1``, in lexicographic order."""
    perms = [perm for perm in orbit.stabilizer if perm != tuple(range(orbit.slot_count))]
    result = []
    for candidate in product(range(m), repeat=orbit.slot_count):
        if all(tuple(candidate[i] for i in perm) >= candidate for perm in perms):
            result.append(candidate)
    return result


@lru_cache(maxsize=256)
def _full_space(orbit_id: int, d: int) -> tuple[SubOrbitId, ...]:
    labels = all_labels(d)
    orbit = ORBITS[orbit_id]
    return tuple(
        SubOrbitId(orbit_id, tuple(labels[rank] for rank in ranks), Taxonomy.FULL)
        for ranks in canonical_representatives(orbit, len(labels))
    )


def suborbit_space(orbit: int | Orbit, d: int, space: Taxonomy | str = Taxonomy.FULL) -> list[SubOrbitId]:
    """Ordered list of canonical sub-orbits of an orbit for a d-plex network.

    This order is the column order of signature matrices.

    Raises:
        GraphletError: For reduced spaces on orbits other than 0-3.
    """
    orbit = get_orbit(orbit)
    space = Taxonomy(space)
    if d < 1:
        raise GraphletError(f"Plex count must be at least 1, got {d}")
    if space == Taxonomy.FULL:
        return list(_full_space(orbit.id, d))
    from multiplex_graphlets.reduction import reduced_space  # pylint: disable=import-outside-toplevel

    return reduced_space(orbit.id, d, space)


def multiset_coefficient(n: int, k: int) -> int:
    """Number of k-combinations with repetition from n elements."""
    return math.comb(n + k - 1, k)


def burnside_class_count(orbit: int | Orbit, m: int) -> int:
    """Number of stabilizer classes of slot labelings over ``m`` labels (Burnside's lemma)."""
    orbit = get_orbit(orbit)
    total = 0
    for perm in orbit.stabilizer:
        seen = set()
        cycles = 0
        for start in range(len(perm)):
            if start in seen:
                continue
            cycles += 1
            position = start
            while position not in seen:
                seen.add(position)
                position = perm[position]
        total += m**cycles
    return total // len(orbit.stabilizer)


def suborbit_space_size(orbit: int | Orbit, m: int) -> int:
    """Size of an orbit's full sub-orbit space for ``m = |E_t|`` edge labels.

    Orbits 0-13 use closed forms. Orbit 14 uses the class count under its order-6
    stabilizer, ``(m^6 + 3m^4 + 2m^2) / 6``, which gives 165 classes at m = 3
    rather than m^5 = 243.
    """
    orbit = get_orbit(orbit)
    if m < 1:
        raise GraphletError(f"Label count must be at least 1, got {m}")
    mc = multiset_coefficient
    closed_forms = {
        0: lambda: m,
        1: lambda: m**2,
        2: lambda: mc(m, 2),
        3: lambda: mc(m, 2) * m,
        4: lambda: m**3,
        5: lambda: m**3,
        6: lambda: m * mc(m, 2),
        7: lambda: mc(m, 3),
        8: lambda: mc(m**2, 2),
        9: lambda: m * mc(m, 2) * m,
        10: lambda: m * mc(m, 2) * m,
        11: lambda: m**4,
        12: lambda: mc(m**2, 2) * m,
        13: lambda: mc(m**2, 2) * m,
    }
    if orbit.id in closed_forms:
        return closed_forms[orbit.id]()
    return burnside_class_count(orbit, m)


def global_columns(d: int, max_size: int, space: Taxonomy | str) -> tuple[SubOrbitId, ...]:
    """Column schema of a signature matrix: all sub-orbits of the orbits in scope, in order."""
    space = Taxonomy(space)
    orbits = orbits_up_to(max_size)
    if space != Taxonomy.FULL:
        orbits = tuple(orbit for orbit in orbits if orbit.id in REDUCIBLE_ORBITS)
    return tuple(column for orbit in orbits for column in suborbit_space(orbit, d, space))
