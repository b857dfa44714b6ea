"""Graphlet metrics: Spearman correlations, GCMs, GCD, histograms and consensus correlations."""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import rankdata

from multiplex_graphlets.counting import GraphletDegreeMatrix
from multiplex_graphlets.helpers.common.constants import Defaults
from multiplex_graphlets.helpers.common.exceptions import ConfigError, MetricsError, ParseError, SchemaMismatchError
from multiplex_graphlets.helpers.tables import read_table, table_values

logger = logging.getLogger(__name__)

LABEL_COLUMN = "label"


@dataclass(frozen=True, eq=False)
class GCM:
    """Graphlet correlation matrix: Spearman correlations between sub-orbit columns."""

    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        """Validate shape and freeze the values."""
        values = np.array(self.values, dtype=np.float64)
        size = len(self.labels)
        if values.shape != (size, size):
            raise MetricsError(f"GCM values of shape {values.shape} do not match {size} labels")
        values.setflags(write=False)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        """Number of sub-orbits."""
        return len(self.labels)

    def upper_triangle(self) -> np.ndarray:
        """Strict upper triangle, row-major."""
        return self.values[np.triu_indices(self.size, k=1)]

    def to_frame(self) -> pd.DataFrame:
        """Values as a labeled square DataFrame."""
        frame = pd.DataFrame(self.values, index=list(self.labels), columns=list(self.labels))
        frame.index.name = LABEL_COLUMN
        return frame


@dataclass(frozen=True, eq=False)
class Histogram:
    """Normalized sub-orbit frequencies of a network collection."""

    labels: tuple[str, ...]
    values: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        """Two-column frame: label, frequency."""
        return pd.DataFrame({LABEL_COLUMN: list(self.labels), "frequency": self.values})


def spearman(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Spearman rank correlation with average ranks for ties.

    Returns:
        The coefficient, or ``None`` when either column is constant (undefined).

    Raises:
        MetricsError: On length mismatch or fewer than 2 values.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise MetricsError(f"Spearman needs two 1-d columns of equal length, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise MetricsError("Spearman needs at least 2 values")
    rx = rankdata(x) - (x.size + 1) / 2
    ry = rankdata(y) - (y.size + 1) / 2
    norm = np.sqrt(np.dot(rx, rx) * np.dot(ry, ry))
    if norm == 0:
        return None
    return float(np.clip(np.dot(rx, ry) / norm, -1.0, 1.0))


def correlation_matrix(counts: np.ndarray) -> np.ndarray:
    """Pairwise Spearman correlations of all columns.

    Undefined entries (a constant column) are 0 off the diagonal; the diagonal is 1.
    """
    counts = np.asarray(counts, dtype=np.float64)
    if counts.ndim != 2 or counts.shape[0] < 2:
        raise MetricsError(f"A GCM needs at least 2 rows, got shape {counts.shape}")
    ranks = rankdata(counts, axis=0)
    centered = ranks - ranks.mean(axis=0)
    norms = np.sqrt((centered**2).sum(axis=0))
    defined = norms > 0
    scaled = np.zeros_like(centered)
    scaled[:, defined] = centered[:, defined] / norms[defined]
    values = np.clip(scaled.T @ scaled, -1.0, 1.0)
    np.fill_diagonal(values, 1.0)
    return values


def gcm(matrix: GraphletDegreeMatrix) -> GCM:
    """Graphlet correlation matrix of a signature matrix, in its column order."""
    if matrix.counts.shape[0] < 2:
        raise MetricsError(f"A GCM needs at least 2 nodes, got {matrix.counts.shape[0]}")
    return GCM(matrix.labels, correlation_matrix(matrix.counts))


def _require_same_schema(labels: Sequence[str], other: Sequence[str], what: str) -> None:
    if tuple(labels) != tuple(other):
        raise SchemaMismatchError(f"{what} do not share a sub-orbit schema ({len(labels)} vs {len(other)} labels)")


def gcd(a: GCM, b: GCM) -> float:
    """Graphlet correlation distance: Euclidean distance between strict upper triangles."""
    _require_same_schema(a.labels, b.labels, "GCMs")
    return float(np.linalg.norm(a.upper_triangle() - b.upper_triangle()))


def suborbit_histogram(matrices: Sequence[GraphletDegreeMatrix]) -> Histogram:
    """Column totals over all nodes and networks divided by the grand total.

    An empty collection yields an empty histogram; all-zero counts yield zeros.
    """
    if not matrices:
        return Histogram((), np.zeros(0))
    labels = matrices[0].labels
    totals = np.zeros(len(labels), dtype=np.float64)
    for matrix in matrices:
        _require_same_schema(labels, matrix.labels, "Degree matrices")
        totals += matrix.counts.sum(axis=0)
    grand = totals.sum()
    return Histogram(labels, totals / grand if grand > 0 else totals)


class PairConsensus(BaseModel):
    """Consensus statistics of one sub-orbit pair."""

    model_config = ConfigDict(frozen=True)

    pair: tuple[str, str]
    fraction_by_group: dict[str, float]
    group_fraction: float = Field(ge=0.0, le=1.0)
    sign: int = Field(ge=-1, le=1, description="1 if every strong correlation is positive, -1 if negative, else 0")
    retained: bool


class ConsensusReport(BaseModel):
    """Two-stage consensus over groups of GCMs."""

    rho_min: float
    f_min: float
    g_min: float
    network_counts: dict[str, int]
    pairs: list[PairConsensus]

    @property
    def retained(self) -> list[PairConsensus]:
        """Pairs passing both stages."""
        return [pair for pair in self.pairs if pair.retained]


def _check_threshold(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"Threshold {name} must be in [0, 1], got {value}")


def consensus_correlations(
    groups: Mapping[str, Sequence[GCM]],
    rho_min: float = Defaults.RHO_MIN,
    f_min: float = Defaults.F_MIN,
    g_min: float = Defaults.G_MIN_SOCIAL,
) -> ConsensusReport:
    """Find sub-orbit correlations that are strong across networks and groups.

    A correlation is strong in a network when ``|rho| > rho_min``. It is significant
    in a group when the fraction of the group's networks where it is strong exceeds
    ``f_min``. A pair is retained when it is significant in at least ``g_min`` of the groups.

    Raises:
        MetricsError: On no groups or an empty group.
        SchemaMismatchError: When the GCMs do not share labels.
        ConfigError: On thresholds outside [0, 1].
    """
    for name, value in (("rho_min", rho_min), ("f_min", f_min), ("g_min", g_min)):
        _check_threshold(name, value)
    if not groups:
        raise MetricsError("Consensus needs at least one group")

    names = list(groups)
    labels: tuple[str, ...] | None = None
    fractions = []
    strong_sign_total = None
    strong_total = None
    for name in names:
        members = groups[name]
        if not members:
            raise MetricsError(f"Group '{name}' has no networks")
        for member in members:
            if labels is None:
                labels = member.labels
            _require_same_schema(labels, member.labels, "GCMs")
        stacked = np.stack([member.upper_triangle() for member in members])
        strong = np.abs(stacked) > rho_min
        fractions.append(strong.mean(axis=0))
        signs = (np.sign(stacked) * strong).sum(axis=0)
        strong_sign_total = signs if strong_sign_total is None else strong_sign_total + signs
        counts = strong.sum(axis=0)
        strong_total = counts if strong_total is None else strong_total + counts

    fraction_matrix = np.vstack(fractions)
    group_fraction = (fraction_matrix > f_min).mean(axis=0)
    rows, cols = np.triu_indices(len(labels), k=1)
    pairs = []
    for index, (row, col) in enumerate(zip(rows, cols)):
        if strong_total[index] and abs(strong_sign_total[index]) == strong_total[index]:
            sign = int(np.sign(strong_sign_total[index]))
        else:
            sign = 0
        pairs.append(
            PairConsensus(
                pair=(labels[row], labels[col]),
                fraction_by_group={name: float(fraction_matrix[g, index]) for g, name in enumerate(names)},
                group_fraction=float(group_fraction[index]),
                sign=sign,
                retained=bool(group_fraction[index] >= g_min),
            )
        )
    report = ConsensusReport(
        rho_min=rho_min,
        f_min=f_min,
        g_min=g_min,
        network_counts={name: len(groups[name]) for name in names},
        pairs=pairs,
    )
    logger.info("Consensus over %d groups: %d of %d pairs retained", len(names), len(report.retained), len(pairs))
    return report


def write_gcm(matrix: GCM, path: str | Path) -> Path:
    """Write a GCM as a labeled square CSV."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    matrix.to_frame().to_csv(path, lineterminator="\n", float_format="%.12g")
    return path


def read_gcm(path: str | Path) -> GCM:
    """Read a GCM written by :func:`write_gcm`.

    Raises:
        ParseError: If the file is not a square, symmetric, labeled matrix.
    """
    frame = read_table(path, index_col=0)
    if frame.index.name != LABEL_COLUMN or frame.empty or list(frame.index) != list(frame.columns):
        raise ParseError(f"{path}: not a labeled square GCM")
    values = table_values(frame, path, np.float64)
    if not np.allclose(values, values.T, atol=1e-9):
        raise ParseError(f"{path}: GCM is not symmetric")
    return GCM(tuple(str(label) for label in frame.columns), values)


def write_histogram(histogram: Histogram, path: str | Path) -> Path:
    """Write a histogram as ``label,frequency`` CSV."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    histogram.to_frame().to_csv(path, index=False, lineterminator="\n", float_format="%.12g")
    return path
