"""Sub-orbit space reductions for orbits 0-3.

Two reductions shrink the full sub-orbit space:

* ``plexcount`` replaces every edge label by its plex count (the edge strength).
* ``distinct`` keeps the plex count and adds an index telling apart different
  labels of equal count inside one graphlet instance. A reduced value is
  ``d * I + count``; it renders as ``count_letter`` with ``x`` for ``I = 0``,
  ``y`` for ``I = 1`` and so on.
"""

import logging
import re
from collections.abc import Sequence
from functools import lru_cache
from itertools import combinations, islice

from multiplex_graphlets.atlas import (
    REDUCIBLE_ORBITS,
    SubOrbitId,
    canonical_representatives,
    canonical_suborbit,
    canonical_tuple,
    get_orbit,
    multiset_coefficient,
)
from multiplex_graphlets.helpers.common.enums import Taxonomy
from multiplex_graphlets.helpers.common.exceptions import GraphletError, ParseError
from multiplex_graphlets.labels import EdgeLabel, label_from_plexes, parse_label, render_label, sort_labels

logger = logging.getLogger(__name__)

DISTINCT_LETTERS = "xyzabcdefghijklmnopqrstuvw"

_REDUCED_LABEL = re.compile(r"^(?P<count>[1-9][0-9]*)_(?P<letter>[a-z])$")
_SUBORBIT = re.compile(r"^(?P<orbit>[0-9]+):(?P<labels>.+)$")


def _check_reducible(orbit_id: int) -> None:
    if orbit_id not in REDUCIBLE_ORBITS:
        raise GraphletError(f"Reductions are defined for orbits 0-3 only, got orbit {orbit_id}")


def _check_labels(labels: Sequence[EdgeLabel], d: int) -> None:
    for label in labels:
        if label <= 0 or label.bit_length() > d:
            raise GraphletError(f"Edge label {label:#b} is not a non-empty subset of {d} plexes")


@lru_cache(maxsize=65536)
def _plexcount_values(orbit_id: int, labels: tuple[EdgeLabel, ...]) -> tuple[int, ...]:
    return canonical_tuple(orbit_id, [label.bit_count() for label in labels])


@lru_cache(maxsize=65536)
def _distinct_values(orbit_id: int, labels: tuple[EdgeLabel, ...], d: int) -> tuple[int, ...]:
    canonical = canonical_suborbit(orbit_id, labels).labels
    seen_by_count: dict[int, list[EdgeLabel]] = {}
    values = []
    for label in canonical:
        group = seen_by_count.setdefault(label.bit_count(), [])
        if label not in group:
            group.append(label)
        values.append(d * group.index(label) + label.bit_count())
    return canonical_tuple(orbit_id, values)


def reduce_plexcount(suborbit: SubOrbitId, d: int) -> SubOrbitId:
    """Map a full-space sub-orbit to the plexcount space.

    Raises:
        GraphletError: For orbits 4-14 or labels outside the d plexes.
    """
    _check_reducible(suborbit.orbit)
    if suborbit.space != Taxonomy.FULL:
        raise GraphletError(f"Expected a full-space sub-orbit, got space '{suborbit.space}'")
    _check_labels(suborbit.labels, d)
    return SubOrbitId(suborbit.orbit, _plexcount_values(suborbit.orbit, suborbit.labels), Taxonomy.PLEXCOUNT)


def reduce_distinct(orbit: int, slot_labels: Sequence[EdgeLabel], d: int) -> SubOrbitId:
    """Map an edge-label assignment to the distinct-links space.

    Distinct indices are assigned per plex-count group in first-appearance order on
    the canonical full-space tuple; the resulting integers are canonicalized again.

    Raises:
        GraphletError: For orbits 4-14, wrong tuple length or labels outside the d plexes.
    """
    orbit_id = get_orbit(orbit).id
    _check_reducible(orbit_id)
    labels = tuple(slot_labels)
    _check_labels(labels, d)
    return SubOrbitId(orbit_id, _distinct_values(orbit_id, labels, d), Taxonomy.DISTINCT)


def reduce_suborbit(suborbit: SubOrbitId, d: int, space: Taxonomy | str) -> SubOrbitId:
    """Project a full-space sub-orbit into ``space`` (identity for the full space)."""
    space = Taxonomy(space)
    if space == Taxonomy.FULL:
        return suborbit
    if space == Taxonomy.PLEXCOUNT:
        return reduce_plexcount(suborbit, d)
    if suborbit.space != Taxonomy.FULL:
        raise GraphletError(f"Expected a full-space sub-orbit, got space '{suborbit.space}'")
    return reduce_distinct(suborbit.orbit, suborbit.labels, d)


def reduced_space_size(orbit: int, d: int, space: Taxonomy | str) -> int:
    """Closed-form size of a reduced sub-orbit space.

    The distinct triangle adds ``d - 1`` classes once three labels of one plex
    count can coexist, i.e. for ``d > 2``.
    """
    orbit_id = get_orbit(orbit).id
    _check_reducible(orbit_id)
    space = Taxonomy(space)
    if d < 1:
        raise GraphletError(f"Plex count must be at least 1, got {d}")
    mc = multiset_coefficient
    if space == Taxonomy.PLEXCOUNT:
        return {0: d, 1: d**2, 2: mc(d, 2), 3: mc(d, 2) * d}[orbit_id]
    if space == Taxonomy.DISTINCT:
        triangle = (mc(d, 2) + d - 1) * d + (d + 1) * (d - 1)
        if d > 2:
            triangle += d - 1
        return {0: d, 1: d**2 + d - 1, 2: mc(d, 2) + d - 1, 3: triangle}[orbit_id]
    raise GraphletError("Use atlas.suborbit_space_size for the full space")


def _label_pool(d: int, per_count: int) -> list[EdgeLabel]:
    """Up to ``per_count`` labels of every plex count, enough to realise every reduced class."""
    pool = []
    for count in range(1, d + 1):
        pool.extend(label_from_plexes(combo) for combo in islice(combinations(range(d), count), per_count))
    return sort_labels(pool)


@lru_cache(maxsize=128)
def _reduced_space(orbit_id: int, d: int, space: Taxonomy) -> tuple[SubOrbitId, ...]:
    orbit = get_orbit(orbit_id)
    pool = _label_pool(d, orbit.slot_count)
    classes = set()
    for ranks in canonical_representatives(orbit, len(pool)):
        full = SubOrbitId(orbit_id, tuple(pool[rank] for rank in ranks), Taxonomy.FULL)
        classes.add(reduce_suborbit(full, d, space))
    result = tuple(sorted(classes, key=SubOrbitId.sort_key))
    logger.debug("Orbit %d reduced space (%s, d=%d): %d classes", orbit_id, space, d, len(result))
    return result


def reduced_space(orbit: int, d: int, space: Taxonomy | str) -> list[SubOrbitId]:
    """Ordered reduced sub-orbit space of an orbit, in integer lexicographic order."""
    orbit_id = get_orbit(orbit).id
    _check_reducible(orbit_id)
    space = Taxonomy(space)
    if space == Taxonomy.FULL:
        raise GraphletError("reduced_space expects the plexcount or distinct space")
    return list(_reduced_space(orbit_id, d, space))


def render_reduced_label(value: int, d: int, space: Taxonomy | str) -> str:
    """Render a reduced label: ``2`` (plexcount) or ``2_y`` (distinct)."""
    space = Taxonomy(space)
    if value < 1:
        raise GraphletError(f"Reduced labels are positive, got {value}")
    if space == Taxonomy.PLEXCOUNT:
        return str(value)
    count = (value - 1) % d + 1
    index = (value - 1) // d
    if index >= len(DISTINCT_LETTERS):
        raise GraphletError(f"Distinct index {index} has no letter")
    return f"{count}_{DISTINCT_LETTERS[index]}"


def parse_reduced_label(text: str, d: int) -> int:
    """Inverse of :func:`render_reduced_label` for the distinct space."""
    match = _REDUCED_LABEL.match(text)
    if match is None:
        raise ParseError(f"Malformed distinct label '{text}'")
    count = int(match.group("count"))
    if count > d:
        raise ParseError(f"Plex count {count} exceeds d={d} in '{text}'")
    letter = match.group("letter")
    if letter not in DISTINCT_LETTERS:
        raise ParseError(f"Unknown distinct index letter in '{text}'")
    return d * DISTINCT_LETTERS.index(letter) + count


def render_suborbit(suborbit: SubOrbitId, plex_names: Sequence[str] | None = None, d: int | None = None) -> str:
    """String id of a sub-orbit, e.g. ``3:ab.ab.b``, ``2:2.2`` or ``2:2_x.2_y``.

    Full-space ids need ``plex_names``; distinct ids need ``d``.
    """
    if suborbit.space == Taxonomy.FULL:
        if plex_names is None:
            raise GraphletError("Rendering a full-space sub-orbit requires plex names")
        parts = [render_label(label, plex_names) for label in suborbit.labels]
    elif suborbit.space == Taxonomy.PLEXCOUNT:
        parts = [str(value) for value in suborbit.labels]
    else:
        if d is None:
            raise GraphletError("Rendering a distinct sub-orbit requires the plex count")
        parts = [render_reduced_label(value, d, Taxonomy.DISTINCT) for value in suborbit.labels]
    return f"{suborbit.orbit}:{'.'.join(parts)}"


def parse_suborbit(
    text: str, space: Taxonomy | str, plex_names: Sequence[str] | None = None, d: int | None = None
) -> SubOrbitId:
    """Parse a string id produced by :func:`render_suborbit`.

    Labels are taken in the given order; the id is not re-canonicalized.
    """
    space = Taxonomy(space)
    match = _SUBORBIT.match(text.strip())
    if match is None:
        raise ParseError(f"Malformed sub-orbit id '{text}'")
    orbit = int(match.group("orbit"))
    parts = match.group("labels").split(".")
    if space == Taxonomy.FULL and plex_names is None:
        raise GraphletError("Parsing a full-space sub-orbit requires plex names")
    if space == Taxonomy.DISTINCT and d is None:
        raise GraphletError("Parsing a distinct sub-orbit requires the plex count")
    try:
        if space == Taxonomy.FULL:
            labels = tuple(parse_label(part, plex_names) for part in parts)
        elif space == Taxonomy.PLEXCOUNT:
            labels = tuple(int(part) for part in parts)
        else:
            labels = tuple(parse_reduced_label(part, d) for part in parts)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(f"Malformed sub-orbit id '{text}': {exc}") from exc
    if get_orbit(orbit).slot_count != len(labels):
        raise ParseError(f"Orbit {orbit} expects {get_orbit(orbit).slot_count} labels in '{text}'")
    return SubOrbitId(orbit, labels, space)


def space_total(d: int, space: Taxonomy | str) -> int:
    """Total number of reduced sub-orbits over orbits 0-3."""
    return sum(reduced_space_size(orbit, d, space) for orbit in REDUCIBLE_ORBITS)
