"""Edge-label algebra.

An edge label is a non-empty set of plexes, stored as an ``int`` bit set over plex
indices ``0..d-1`` (bit ``i`` set when the edge exists in plex ``i``). Labels are
ordered lexically: fewer plexes first, then by the ascending sequence of plex indices.
Plex indices follow the declared plex order, so with alphabetically declared plex
names this is the lexical order on names.
"""

import re
from collections.abc import Iterable, Sequence
from functools import lru_cache
from itertools import combinations

EdgeLabel = int

LabelKey = tuple[int, tuple[int, ...]]


def label_from_plexes(indices: Iterable[int]) -> EdgeLabel:
    """Build a label from plex indices."""
    label = 0
    for index in indices:
        if index < 0:
            raise ValueError(f"Plex index must be non-negative, got {index}")
        label |= 1 << index
    return label


def plex_indices(label: EdgeLabel) -> tuple[int, ...]:
    """Return the sorted plex indices contained in a label."""
    indices = []
    index = 0
    while label:
        if label & 1:
            indices.append(index)
        label >>= 1
        index += 1
    return tuple(indices)


def plex_count(label: EdgeLabel) -> int:
    """Number of plexes an edge exists in (its strength)."""
    return label.bit_count()


@lru_cache(maxsize=65536)
def label_key(label: EdgeLabel) -> LabelKey:
    """Sort key implementing the lexical label order."""
    return (label.bit_count(), plex_indices(label))


def sort_labels(labels: Iterable[EdgeLabel]) -> list[EdgeLabel]:
    """Sort labels in lexical order."""
    return sorted(labels, key=label_key)


@lru_cache(maxsize=16)
def all_labels(d: int) -> tuple[EdgeLabel, ...]:
    """All 2**d - 1 labels of a d-plex network (the set E_t), in lexical order.

    Generated by increasing plex count, so the result is already sorted.
    """
    if d < 1:
        raise ValueError(f"Plex count must be at least 1, got {d}")
    return tuple(label_from_plexes(combo) for size in range(1, d + 1) for combo in combinations(range(d), size))


def render_label(label: EdgeLabel, plex_names: Sequence[str]) -> str:
    """Render a label as the concatenation of its plex names, e.g. ``ab``."""
    return "".join(plex_names[index] for index in plex_indices(label))


@lru_cache(maxsize=256)
def _label_pattern(plex_names: tuple[str, ...]) -> re.Pattern:
    # Longest names first so that multi-character names win over their prefixes.
    alternatives = sorted(plex_names, key=len, reverse=True)
    return re.compile("|".join(re.escape(name) for name in alternatives))


def parse_label(text: str, plex_names: Sequence[str]) -> EdgeLabel:
    """Parse a concatenation of declared plex names into a label.

    Raises:
        ValueError: If the text is empty or contains anything but declared plex names.
    """
    names = tuple(plex_names)
    if not text:
        raise ValueError("Empty edge label")
    pattern = _label_pattern(names)
    index_of = {name: position for position, name in enumerate(names)}
    label = 0
    position = 0
    while position < len(text):
        match = pattern.match(text, position)
        if match is None:
            raise ValueError(f"Unknown plex name in label '{text}' at '{text[position:]}'")
        label |= 1 << index_of[match.group(0)]
        position = match.end()
    return label
