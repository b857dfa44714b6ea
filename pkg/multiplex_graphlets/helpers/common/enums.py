"""Enums."""

from enum import StrEnum, auto


class Taxonomy(StrEnum):
    """Sub-orbit space a signature matrix is expressed in."""

    FULL = auto()
    PLEXCOUNT = auto()
    DISTINCT = auto()


class GeneratorFamily(StrEnum):
    """Synthetic single-plex generator families."""

    ER = auto()
    WS = auto()
    BA = auto()
    PL = auto()
