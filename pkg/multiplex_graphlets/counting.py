"""Graphlet degree counting.

Every connected induced subgraph on 2..max_size nodes of the flattened topology is
visited exactly once by exclusive-neighborhood extension (ESU) from its smallest
node. Each instance is classified through a precomputed adjacency-code table and
every node of it is credited with the sub-orbit read from the original labels.
"""

import logging
from collections import Counter
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from pathlib import Path

import numpy as np
import pandas as pd

from multiplex_graphlets.atlas import (
    SubOrbitId,
    canonical_suborbit,
    classification_table,
    classify_graphlet,
    get_orbit,
    global_columns,
    orbits_up_to,
)
from multiplex_graphlets.helpers.common.constants import ErrorMessages
from multiplex_graphlets.helpers.common.enums import Taxonomy
from multiplex_graphlets.helpers.common.exceptions import ConfigError, GraphletError, InputError, ParseError
from multiplex_graphlets.helpers.tables import read_table, table_values
from multiplex_graphlets.multiplex import MultiplexGraph, default_plex_names
from multiplex_graphlets.reduction import parse_suborbit, reduce_suborbit

logger = logging.getLogger(__name__)

NODE_COLUMN = "node"

_PAIRS = {k: tuple(combinations(range(k), 2)) for k in (2, 3, 4)}


@dataclass(frozen=True, eq=False)
class GraphletDegreeMatrix:
    """Node x sub-orbit counts; row ``i`` is the signature vector of node ``i``."""

    counts: np.ndarray
    columns: tuple[SubOrbitId, ...]
    node_names: tuple[str, ...]
    plex_names: tuple[str, ...]
    space: Taxonomy
    max_size: int
    labels: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        """Freeze the count array and render the column ids."""
        counts = np.array(self.counts, dtype=np.int64)
        if counts.shape != (len(self.node_names), len(self.columns)):
            raise InputError(
                f"Count matrix shape {counts.shape} does not match "
                f"{len(self.node_names)} nodes x {len(self.columns)} columns"
            )
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        d = len(self.plex_names)
        object.__setattr__(
            self, "labels", tuple(column.render(plex_names=self.plex_names, d=d) for column in self.columns)
        )

    @property
    def d(self) -> int:
        """Plex count of the counted graph."""
        return len(self.plex_names)

    @property
    def shape(self) -> tuple[int, int]:
        """(nodes, sub-orbits)."""
        return self.counts.shape

    @cached_property
    def column_index(self) -> dict[SubOrbitId, int]:
        """Column position of every sub-orbit."""
        return {column: index for index, column in enumerate(self.columns)}

    def orbit_totals(self) -> dict[int, np.ndarray]:
        """Per-node counts summed over the sub-orbits of each orbit."""
        totals: dict[int, np.ndarray] = {}
        orbit_of = np.array([column.orbit for column in self.columns], dtype=np.int64)
        for orbit in sorted(set(orbit_of.tolist())):
            totals[orbit] = self.counts[:, orbit_of == orbit].sum(axis=1)
        return totals

    def graphlet_counts(self) -> dict[int, int]:
        """Instances per graphlet: each orbit's total divided by its nodes per instance.

        Raises:
            GraphletError: If an orbit total is not a multiple of its nodes per instance,
                or the orbits of one graphlet disagree.
        """
        totals = self.orbit_totals()
        instances: dict[int, int] = {}
        for orbit in orbits_up_to(self.max_size):
            total = int(totals[orbit.id].sum())
            count, remainder = divmod(total, orbit.multiplicity)
            if remainder or instances.setdefault(orbit.graphlet, count) != count:
                raise GraphletError(f"Orbit {orbit.id} total {total} is inconsistent with graphlet {orbit.graphlet}")
        return instances

    def to_frame(self) -> pd.DataFrame:
        """Counts as a DataFrame indexed by node name with sub-orbit id columns."""
        frame = pd.DataFrame(self.counts, index=list(self.node_names), columns=list(self.labels))
        frame.index.name = NODE_COLUMN
        return frame

    def equals(self, other: "GraphletDegreeMatrix") -> bool:
        """Same schema, same nodes and identical counts."""
        return (
            self.columns == other.columns
            and self.node_names == other.node_names
            and self.space == other.space
            and np.array_equal(self.counts, other.counts)
        )


@lru_cache(maxsize=64)
def _column_schema(d: int, max_size: int, space: Taxonomy) -> tuple[tuple[SubOrbitId, ...], dict[SubOrbitId, int]]:
    columns = global_columns(d, max_size, space)
    return columns, {column: index for index, column in enumerate(columns)}


def _validate_scope(max_size: int, space: Taxonomy) -> None:
    if max_size not in (2, 3, 4):
        raise ConfigError(f"Graphlet size must be 2, 3 or 4, got {max_size}")
    if space != Taxonomy.FULL and max_size > 3:
        raise ConfigError(ErrorMessages.REDUCED_MAX_SIZE)


class _Classifier:
    """Maps (orbit, raw slot labels) to a column, memoizing canonicalization and reduction."""

    def __init__(self, d: int, max_size: int, space: Taxonomy):
        self.d = d
        self.space = space
        _, self.index = _column_schema(d, max_size, space)
        self.cache: dict[tuple[int, tuple[int, ...]], int] = {}

    def column(self, orbit: int, labels: tuple[int, ...]) -> int:
        key = (orbit, labels)
        column = self.cache.get(key)
        if column is None:
            suborbit = reduce_suborbit(canonical_suborbit(orbit, labels), self.d, self.space)
            column = self.index[suborbit]
            self.cache[key] = column
        return column


def _count_roots(graph: MultiplexGraph, roots: Sequence[int], max_size: int, space: Taxonomy) -> Counter:
    """ESU enumeration from the given roots; returns sparse counts keyed by (node, column)."""
    adjacency = graph.adjacency
    edge_labels = graph.edges
    classifier = _Classifier(graph.d, max_size, space)
    tables = {k: classification_table(k) for k in range(2, max_size + 1)}
    counts: Counter = Counter()

    def record(nodes: tuple[int, ...]) -> None:
        ordered = tuple(sorted(nodes))
        k = len(ordered)
        code = 0
        for bit, (a, b) in enumerate(_PAIRS[k]):
            if ordered[b] in adjacency[ordered[a]]:
                code |= 1 << bit
        classified = tables[k][code]
        for position, node in enumerate(ordered):
            labels = tuple(edge_labels[(ordered[a], ordered[b])] for a, b in classified.slots[position])
            counts[(node, classifier.column(classified.orbits[position], labels))] += 1

    def extend(nodes: tuple[int, ...], extension: set[int], closed: frozenset[int], root: int) -> None:
        if len(nodes) > 1:
            record(nodes)
        if len(nodes) == max_size:
            return
        remaining = set(extension)
        for w in sorted(extension):
            remaining.discard(w)
            exclusive = {u for u in adjacency[w] if u > root and u not in closed}
            extend(nodes + (w,), remaining | exclusive, closed | adjacency[w] | {w}, root)

    for root in roots:
        extend((root,), {u for u in adjacency[root] if u > root}, frozenset(adjacency[root] | {root}), root)
    return counts


def _to_matrix(graph: MultiplexGraph, counts: Counter, max_size: int, space: Taxonomy) -> GraphletDegreeMatrix:
    columns, _ = _column_schema(graph.d, max_size, space)
    matrix = np.zeros((graph.n, len(columns)), dtype=np.int64)
    for (node, column), value in counts.items():
        matrix[node, column] += value
    return GraphletDegreeMatrix(matrix, columns, graph.node_names, graph.plex_names, space, max_size)


def count_graphlets(
    graph: MultiplexGraph, max_size: int = 3, space: Taxonomy | str = Taxonomy.FULL, workers: int = 1
) -> GraphletDegreeMatrix:
    """Count per-node sub-orbit occurrences of all connected induced subgraphs up to ``max_size`` nodes.

    Args:
        graph: Labeled multiplex graph.
        max_size: Largest graphlet size (2, 3 or 4).
        space: Taxonomy space; reduced spaces cover orbits 0-3 and need ``max_size <= 3``.
        workers: Worker processes; roots are split into interleaved chunks and the
            partial counts are added, so the result does not depend on this value.

    Returns:
        The graphlet degree matrix in the global column order.

    Raises:
        ConfigError: On an unsupported size/space combination or a non-positive worker count.
    """
    space = Taxonomy(space)
    _validate_scope(max_size, space)
    if workers < 1:
        raise ConfigError(f"Worker count must be positive, got {workers}")

    roots = list(range(graph.n))
    logger.debug("Counting graphlets: %r, max_size=%d, space=%s, workers=%d", graph, max_size, space, workers)
    if workers == 1 or graph.n < 2:
        total = _count_roots(graph, roots, max_size, space)
    else:
        chunks = [roots[offset :: workers * 4] for offset in range(min(workers * 4, graph.n))]
        total = Counter()
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for partial in executor.map(
                _count_roots,
                [graph] * len(chunks),
                chunks,
                [max_size] * len(chunks),
                [space] * len(chunks),
            ):
                total.update(partial)
    result = _to_matrix(graph, total, max_size, space)
    logger.info(
        "Counted %d graphlet-node incidences over %d sub-orbits for %d nodes",
        int(result.counts.sum()),
        len(result.columns),
        graph.n,
    )
    return result


def _induced_connected(nodes: Sequence[int], adjacency: Sequence[frozenset[int]]) -> bool:
    members = set(nodes)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for w in adjacency[stack.pop()] & members:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(members)


def brute_force_counts(
    graph: MultiplexGraph, max_size: int = 3, space: Taxonomy | str = Taxonomy.FULL
) -> GraphletDegreeMatrix:
    """Reference counter: test every node subset, classify connected ones directly.

    Intended for small graphs (tens of nodes).
    """
    space = Taxonomy(space)
    _validate_scope(max_size, space)
    _, index = _column_schema(graph.d, max_size, space)
    adjacency = graph.adjacency
    counts: Counter = Counter()
    for size in range(2, max_size + 1):
        for nodes in combinations(range(graph.n), size):
            if not _induced_connected(nodes, adjacency):
                continue
            matrix = np.array([[v in adjacency[u] for v in nodes] for u in nodes], dtype=bool)
            classified = classify_graphlet(matrix)
            for position, node in enumerate(nodes):
                labels = [graph.label(nodes[a], nodes[b]) for a, b in classified.slots[position]]
                suborbit = reduce_suborbit(canonical_suborbit(classified.orbits[position], labels), graph.d, space)
                counts[(node, index[suborbit])] += 1
    return _to_matrix(graph, counts, max_size, space)


def write_degree_matrix(matrix: GraphletDegreeMatrix, path: str | Path) -> Path:
    """Write the matrix as CSV: header ``node,<sub-orbit ids>``, one row per node."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    matrix.to_frame().to_csv(path, lineterminator="\n")
    logger.debug("Wrote degree matrix %s to %s", matrix.shape, path)
    return path


def read_degree_matrix(
    path: str | Path, space: Taxonomy | str, plex_names: Sequence[str] | None = None, d: int | None = None
) -> GraphletDegreeMatrix:
    """Read a CSV written by :func:`write_degree_matrix`.

    Full-space files need ``plex_names``; reduced files need ``d`` (plex names then
    default to ``a, b, ...``).
    """
    space = Taxonomy(space)
    if plex_names is None:
        if d is None:
            raise InputError("Reading a degree matrix requires plex names or the plex count")
        plex_names = default_plex_names(d)
    plex_names = tuple(plex_names)
    frame = read_table(path, index_col=0, dtype={NODE_COLUMN: str})
    if frame.index.name != NODE_COLUMN:
        raise ParseError(f"{path}: first column must be '{NODE_COLUMN}'")
    columns = tuple(parse_suborbit(text, space, plex_names=plex_names, d=len(plex_names)) for text in frame.columns)
    max_size = max((get_orbit(column.orbit).size for column in columns), default=2)
    return GraphletDegreeMatrix(
        table_values(frame, path, np.int64),
        columns,
        tuple(str(name) for name in frame.index),
        plex_names,
        space,
        max_size,
    )
