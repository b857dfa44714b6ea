"""Multiplex graph model, edge-list I/O, flattening and k-plex extraction."""

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from types import MappingProxyType

import networkx as nx
import numpy as np

from multiplex_graphlets.helpers.common.constants import Defaults, ErrorMessages
from multiplex_graphlets.helpers.common.exceptions import ConfigError, InputError, ParseError
from multiplex_graphlets.labels import EdgeLabel, parse_label, render_label

logger = logging.getLogger(__name__)

FLAT_PLEX_NAME = "flat"

Pair = tuple[int, int]


def default_plex_names(d: int) -> tuple[str, ...]:
    """Plex names ``a, b, c, ...`` followed by ``p26, p27, ...`` beyond the alphabet."""
    return tuple(chr(ord("a") + i) if i < 26 else f"p{i}" for i in range(d))


class MultiplexGraph:
    """Undirected multiplex graph with one non-empty edge label per node pair.

    Immutable after construction. Nodes are dense indices ``0..n-1``; ``node_names``
    keeps the original identifiers. Edge keys are normalized to ``(i, j)`` with ``i < j``.
    """

    __slots__ = ("_n", "_plex_names", "_node_names", "_edges", "_adjacency")

    def __init__(
        self,
        n: int,
        plex_names: Sequence[str],
        edges: Mapping[Pair, EdgeLabel],
        node_names: Sequence[str] | None = None,
    ) -> None:
        """Validate and freeze the graph.

        Raises:
            InputError: On self-loops, out-of-range nodes, empty labels or labels outside the plex set.
        """
        plex_names = tuple(plex_names)
        d = len(plex_names)
        if d < 1:
            raise InputError("A multiplex graph needs at least one plex")
        if d > Defaults.MAX_PLEXES:
            raise InputError(ErrorMessages.TOO_MANY_PLEXES.format(d=d, limit=Defaults.MAX_PLEXES))
        if len(set(plex_names)) != d:
            raise InputError(f"Duplicate plex names: {plex_names}")
        if n < 0:
            raise InputError(f"Node count must be non-negative, got {n}")
        if node_names is None:
            node_names = tuple(str(i) for i in range(n))
        node_names = tuple(str(name) for name in node_names)
        if len(node_names) != n:
            raise InputError(f"Expected {n} node names, got {len(node_names)}")
        if len(set(node_names)) != n:
            raise InputError("Node names must be unique")

        full = (1 << d) - 1
        normalized: dict[Pair, EdgeLabel] = {}
        adjacency: list[set[int]] = [set() for _ in range(n)]
        for (u, v), label in edges.items():
            if u == v:
                raise InputError(f"Self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"Edge ({u}, {v}) references a node outside 0..{n - 1}")
            if label <= 0 or label & ~full:
                raise InputError(f"Edge ({u}, {v}) has label {label:#b} outside the {d}-plex label set")
            key = (u, v) if u < v else (v, u)
            normalized[key] = normalized.get(key, 0) | label
            adjacency[u].add(v)
            adjacency[v].add(u)

        self._n = n
        self._plex_names = plex_names
        self._node_names = node_names
        self._edges = MappingProxyType(dict(sorted(normalized.items())))
        self._adjacency = tuple(frozenset(neighbors) for neighbors in adjacency)

    @classmethod
    def from_plex_edge_lists(
        cls,
        n: int,
        plex_names: Sequence[str],
        edge_lists: Sequence[Iterable[Pair]],
        node_names: Sequence[str] | None = None,
    ) -> "MultiplexGraph":
        """Build a graph from one edge list per plex (E^1, ..., E^d)."""
        if len(edge_lists) != len(plex_names):
            raise InputError(f"Got {len(edge_lists)} edge lists for {len(plex_names)} plexes")
        edges: dict[Pair, EdgeLabel] = {}
        for alpha, edge_list in enumerate(edge_lists):
            for u, v in edge_list:
                key = (u, v) if u < v else (v, u)
                edges[key] = edges.get(key, 0) | (1 << alpha)
        return cls(n, plex_names, edges, node_names)

    @property
    def n(self) -> int:
        """Node count."""
        return self._n

    @property
    def d(self) -> int:
        """Plex count."""
        return len(self._plex_names)

    @property
    def plex_names(self) -> tuple[str, ...]:
        """Ordered plex identifiers."""
        return self._plex_names

    @property
    def node_names(self) -> tuple[str, ...]:
        """Original node identifiers, indexed by dense node id."""
        return self._node_names

    @property
    def edges(self) -> Mapping[Pair, EdgeLabel]:
        """Read-only map ``(i, j) -> label`` with ``i < j``, sorted by pair."""
        return self._edges

    @property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        """Flattened adjacency sets."""
        return self._adjacency

    @property
    def edge_count(self) -> int:
        """Number of labeled node pairs."""
        return len(self._edges)

    def neighbors(self, node: int) -> frozenset[int]:
        """Neighbors of a node in the flattened topology."""
        return self._adjacency[node]

    def label(self, u: int, v: int) -> EdgeLabel | None:
        """Label of the edge between two nodes, or None."""
        return self._edges.get((u, v) if u < v else (v, u))

    def plex_edges(self, alpha: int) -> frozenset[Pair]:
        """The edge set E^alpha of one plex."""
        if not 0 <= alpha < self.d:
            raise ConfigError(f"Plex index {alpha} out of range 0..{self.d - 1}")
        bit = 1 << alpha
        return frozenset(pair for pair, label in self._edges.items() if label & bit)

    def to_networkx(self) -> nx.Graph:
        """Flattened topology as a networkx graph with ``label`` and ``plexes`` edge attributes."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self._n))
        for (u, v), label in self._edges.items():
            graph.add_edge(u, v, label=label, plexes=render_label(label, self._plex_names))
        return graph

    def _identity(self):
        return (self._n, self._plex_names, self._node_names, tuple(self._edges.items()))

    def __eq__(self, other: object) -> bool:
        """Graphs are equal when nodes, plexes and labeled edges all match."""
        if not isinstance(other, MultiplexGraph):
            return NotImplemented
        return self._identity() == other._identity()

    def __hash__(self) -> int:
        """Hash consistent with equality."""
        return hash(self._identity())

    def __repr__(self) -> str:
        """Short summary."""
        return f"MultiplexGraph(n={self._n}, d={self.d}, edges={self.edge_count})"

    def __getstate__(self):
        """Pickle support for worker processes."""
        return (self._n, self._plex_names, dict(self._edges), self._node_names)

    def __setstate__(self, state):
        """Restore from pickled state."""
        n, plex_names, edges, node_names = state
        self.__init__(n, plex_names, edges, node_names)


@dataclass(frozen=True)
class PlexSelection:
    """Strictly increasing plex indices defining a k-plex."""

    indices: tuple[int, ...]

    def __post_init__(self):
        """Validate the selection."""
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if not self.indices:
            raise ConfigError("A plex selection needs at least one plex")
        if any(i < 0 for i in self.indices):
            raise ConfigError(f"Negative plex index in {self.indices}")
        if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
            raise ConfigError(f"Plex indices must be strictly increasing, got {self.indices}")

    @property
    def k(self) -> int:
        """Number of selected plexes."""
        return len(self.indices)

    def names(self, plex_names: Sequence[str]) -> tuple[str, ...]:
        """Names of the selected plexes."""
        return tuple(plex_names[i] for i in self.indices)

    def slug(self, plex_names: Sequence[str]) -> str:
        """Filesystem-friendly identifier, e.g. ``a+c``."""
        return "+".join(self.names(plex_names))


# ---------------------------------------------------------------------------
# Edge-list documents
# ---------------------------------------------------------------------------


def _split_names(value: str, line_number: int, what: str) -> list[str]:
    names = [name.strip() for name in value.split(",")]
    if not names or any(not name or any(ch.isspace() for ch in name) for name in names):
        raise ParseError(f"Malformed {what} list '{value}'", line_number)
    return names


def parse_multiplex(text: str) -> MultiplexGraph:
    """Parse an edge-list document.

    Format: a ``#plexes a,b,c`` header, optional ``#nodes N`` and ``#names u0,u1,...``
    headers, then body lines ``u v L`` where ``L`` concatenates declared plex names.
    ``%`` starts a comment. Repeated pairs are unioned into one label.

    Raises:
        ParseError: On malformed lines, undeclared plexes, self-loops or header problems.
    """
    plex_names: list[str] | None = None
    declared_nodes: int | None = None
    index_of: dict[str, int] = {}
    names: list[str] = []
    edges: dict[Pair, EdgeLabel] = {}
    seen_edge = False

    def node_index(token: str) -> int:
        if token not in index_of:
            index_of[token] = len(names)
            names.append(token)
        return index_of[token]

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#"):
            directive, _, value = line[1:].partition(" ")
            directive = directive.strip().lower()
            value = value.strip()
            if seen_edge:
                raise ParseError(f"Header '#{directive}' after edge lines", line_number)
            if directive == "plexes":
                if plex_names is not None:
                    raise ParseError("Duplicate #plexes header", line_number)
                plex_names = _split_names(value, line_number, "plex")
                if len(set(plex_names)) != len(plex_names):
                    raise ParseError(f"Duplicate plex names in '{value}'", line_number)
                if len(plex_names) > Defaults.MAX_PLEXES:
                    raise ParseError(
                        ErrorMessages.TOO_MANY_PLEXES.format(d=len(plex_names), limit=Defaults.MAX_PLEXES),
                        line_number,
                    )
            elif directive == "nodes":
                try:
                    declared_nodes = int(value)
                except ValueError as err:
                    raise ParseError(f"Malformed node count '{value}'", line_number) from err
                if declared_nodes < 0:
                    raise ParseError(f"Negative node count {declared_nodes}", line_number)
            elif directive == "names":
                if names:
                    raise ParseError("Duplicate #names header", line_number)
                for token in _split_names(value, line_number, "node name"):
                    if token in index_of:
                        raise ParseError(f"Duplicate node name '{token}'", line_number)
                    node_index(token)
            else:
                raise ParseError(f"Unknown header '#{directive}'", line_number)
            continue

        if plex_names is None:
            raise ParseError("Edge line before the #plexes header", line_number)
        tokens = line.split()
        if len(tokens) != 3:
            raise ParseError(f"Expected 'u v L', got '{line}'", line_number)
        u_token, v_token, label_token = tokens
        if u_token == v_token:
            raise ParseError(f"Self-loop on node '{u_token}'", line_number)
        try:
            label = parse_label(label_token, plex_names)
        except ValueError as err:
            raise ParseError(str(err), line_number) from err
        u, v = node_index(u_token), node_index(v_token)
        key = (u, v) if u < v else (v, u)
        edges[key] = edges.get(key, 0) | label
        seen_edge = True

    if plex_names is None:
        raise ParseError("Missing #plexes header")

    n = len(names)
    if declared_nodes is not None:
        if n > declared_nodes:
            raise ParseError(f"#nodes declares {declared_nodes} nodes but {n} distinct nodes were found")
        # Isolated nodes take the smallest unused non-negative integer names.
        candidate = 0
        while len(names) < declared_nodes:
            if str(candidate) not in index_of:
                node_index(str(candidate))
            candidate += 1
        n = declared_nodes

    graph = MultiplexGraph(n, plex_names, edges, names)
    logger.debug("Parsed %r", graph)
    return graph


def serialize_multiplex(graph: MultiplexGraph) -> str:
    """Serialize a graph to the edge-list format, labels in canonical lexical form."""
    for name in graph.node_names:
        if not name or "," in name or "%" in name or name.startswith("#") or any(ch.isspace() for ch in name):
            raise InputError(f"Node name '{name}' cannot be serialized")
    lines = [f"#plexes {','.join(graph.plex_names)}", f"#nodes {graph.n}"]
    if graph.n:
        lines.append(f"#names {','.join(graph.node_names)}")
    names = graph.node_names
    for (u, v), label in graph.edges.items():
        lines.append(f"{names[u]} {names[v]} {render_label(label, graph.plex_names)}")
    return "\n".join(lines) + "\n"


def read_multiplex(path: str | Path) -> MultiplexGraph:
    """Read an edge-list file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise InputError(f"Cannot read {path}: {err}") from err
    graph = parse_multiplex(text)
    logger.info("Loaded %s: %d nodes, %d edges, %d plexes", path, graph.n, graph.edge_count, graph.d)
    return graph


def write_multiplex(graph: MultiplexGraph, path: str | Path) -> Path:
    """Write an edge-list file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_multiplex(graph), encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# Flattening and k-plex extraction
# ---------------------------------------------------------------------------


def flatten(graph: MultiplexGraph) -> MultiplexGraph:
    """Collapse a multiplex into a single-plex graph over the union of all plex edge sets."""
    if graph.d == 1:
        return graph
    edges = dict.fromkeys(graph.edges, 1)
    return MultiplexGraph(graph.n, (FLAT_PLEX_NAME,), edges, graph.node_names)


def extract_kplex(graph: MultiplexGraph, selection: PlexSelection) -> MultiplexGraph:
    """Restrict a graph to the selected plexes, re-indexing them 0..k-1.

    Edges whose label does not meet the selection are dropped.

    Raises:
        ConfigError: If the selection references a plex outside 0..d-1.
    """
    if selection.indices[-1] >= graph.d:
        raise ConfigError(f"Plex index {selection.indices[-1]} out of range 0..{graph.d - 1}")
    remap: dict[EdgeLabel, EdgeLabel] = {}
    edges: dict[Pair, EdgeLabel] = {}
    for pair, label in graph.edges.items():
        new_label = remap.get(label)
        if new_label is None:
            new_label = 0
            for position, alpha in enumerate(selection.indices):
                if label >> alpha & 1:
                    new_label |= 1 << position
            remap[label] = new_label
        if new_label:
            edges[pair] = new_label
    return MultiplexGraph(graph.n, selection.names(graph.plex_names), edges, graph.node_names)


def kplex_combinations(d: int, k: int) -> list[PlexSelection]:
    """All C(d, k) plex selections in lexicographic order.

    Raises:
        ConfigError: Unless 1 <= k <= d.
    """
    if not 1 <= k <= d:
        raise ConfigError(f"k must satisfy 1 <= k <= d, got k={k}, d={d}")
    return [PlexSelection(combo) for combo in combinations(range(d), k)]


def sample_kplex_combinations(d: int, k: int, size: int, seed: int) -> list[PlexSelection]:
    """Uniformly sample ``size`` distinct k-plex selections, returned in lexicographic order.

    When ``size >= C(d, k)`` the exhaustive list is returned.
    """
    if not 1 <= k <= d:
        raise ConfigError(f"k must satisfy 1 <= k <= d, got k={k}, d={d}")
    if size < 1:
        raise ConfigError(f"Sample size must be positive, got {size}")
    if size >= math.comb(d, k):
        return kplex_combinations(d, k)
    rng = np.random.default_rng(seed)
    chosen: set[tuple[int, ...]] = set()
    while len(chosen) < size:
        chosen.add(tuple(sorted(int(i) for i in rng.choice(d, size=k, replace=False))))
    return [PlexSelection(combo) for combo in sorted(chosen)]
