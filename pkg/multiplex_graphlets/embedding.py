"""Pairwise GCD matrices and classical multidimensional scaling to 3D."""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.spatial.distance import pdist, squareform

from multiplex_graphlets.helpers.common.exceptions import EmbeddingError, SchemaMismatchError
from multiplex_graphlets.helpers.encoders import dumps
from multiplex_graphlets.metrics import GCM

logger = logging.getLogger(__name__)

DIMENSIONS = 3
TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric, non-negative distance matrix with a zero diagonal."""

    ids: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        """Validate and freeze; entries within tolerance of symmetric are symmetrized exactly."""
        values = np.array(self.values, dtype=np.float64)
        n = len(self.ids)
        if values.shape != (n, n):
            raise EmbeddingError(f"Distance matrix of shape {values.shape} does not match {n} ids")
        if not np.all(np.isfinite(values)):
            raise EmbeddingError("Distance matrix has non-finite entries")
        if not np.allclose(values, values.T, rtol=0.0, atol=TOLERANCE):
            raise EmbeddingError("Distance matrix is not symmetric")
        if np.any(values < -TOLERANCE):
            raise EmbeddingError("Distance matrix has negative entries")
        if np.any(np.abs(np.diag(values)) > TOLERANCE):
            raise EmbeddingError("Distance matrix has a non-zero diagonal")
        values = np.clip((values + values.T) / 2, 0.0, None)
        np.fill_diagonal(values, 0.0)
        values.setflags(write=False)
        object.__setattr__(self, "ids", tuple(str(i) for i in self.ids))
        object.__setattr__(self, "values", values)

    def to_frame(self) -> pd.DataFrame:
        """Labeled square DataFrame."""
        frame = pd.DataFrame(self.values, index=list(self.ids), columns=list(self.ids))
        frame.index.name = "id"
        return frame


@dataclass(frozen=True, eq=False)
class EmbeddingResult:
    """Coordinates and quality figures of a 3D embedding."""

    ids: tuple[str, ...]
    coordinates: np.ndarray
    eigenvalues: np.ndarray
    stress: float
    truncated_mass: float


def gcd_matrix(gcms: Sequence[GCM], ids: Sequence[str] | None = None) -> DistanceMatrix:
    """All pairwise graphlet correlation distances.

    Raises:
        EmbeddingError: On an empty list or mismatching ids.
        SchemaMismatchError: When the GCMs do not share labels.
    """
    if not gcms:
        raise EmbeddingError("gcd_matrix needs at least one GCM")
    ids = tuple(str(i) for i in ids) if ids is not None else tuple(str(i) for i in range(len(gcms)))
    if len(ids) != len(gcms):
        raise EmbeddingError(f"Got {len(ids)} ids for {len(gcms)} GCMs")
    labels = gcms[0].labels
    for matrix in gcms:
        if matrix.labels != labels:
            raise SchemaMismatchError("GCMs do not share a sub-orbit schema")
    if len(gcms) == 1:
        return DistanceMatrix(ids, np.zeros((1, 1)))
    stacked = np.stack([matrix.upper_triangle() for matrix in gcms])
    return DistanceMatrix(ids, squareform(pdist(stacked, metric="euclidean")))


def mds3(matrix: DistanceMatrix) -> EmbeddingResult:
    """Classical (Torgerson) MDS into three dimensions.

    The squared distances are double-centred and the top three eigenpairs kept, with
    negative eigenvalues truncated to zero. Each axis is flipped so that its
    largest-magnitude coordinate is positive.
    """
    n = len(matrix.ids)
    if n == 0:
        raise EmbeddingError("Cannot embed an empty distance matrix")
    distances = matrix.values
    centering = np.eye(n) - np.ones((n, n)) / n
    gram = -0.5 * centering @ (distances**2) @ centering
    gram = (gram + gram.T) / 2

    evals, evecs = np.linalg.eigh(gram)
    order = np.argsort(-evals, kind="stable")
    evals = evals[order]
    evecs = evecs[:, order]

    kept = min(DIMENSIONS, n)
    eigenvalues = np.zeros(DIMENSIONS)
    eigenvalues[:kept] = np.clip(evals[:kept], 0.0, None)
    coordinates = np.zeros((n, DIMENSIONS))
    coordinates[:, :kept] = evecs[:, :kept] * np.sqrt(eigenvalues[:kept])
    for axis in range(DIMENSIONS):
        column = coordinates[:, axis]
        if column[np.argmax(np.abs(column))] < 0:
            coordinates[:, axis] = -column
    coordinates += 0.0  # normalizes negative zeros

    scale = np.abs(evals).max(initial=0.0)
    negative = evals[evals < -TOLERANCE * max(scale, 1.0)]
    total = np.abs(evals).sum()
    truncated_mass = float(np.abs(negative).sum() / total) if total > 0 else 0.0

    embedded = squareform(pdist(coordinates)) if n > 1 else np.zeros((1, 1))
    norm = np.linalg.norm(distances)
    stress = float(np.linalg.norm(distances - embedded) / norm) if norm > 0 else 0.0

    logger.info("Embedded %d networks in 3D: stress=%.3g truncated_mass=%.3g", n, stress, truncated_mass)
    return EmbeddingResult(matrix.ids, coordinates, eigenvalues, stress, truncated_mass)


def write_coordinates(
    result: EmbeddingResult, path: str | Path, groups: Mapping[str, str] | None = None
) -> tuple[Path, Path]:
    """Write ``id[,group],x,y,z`` CSV and a ``<stem>.quality.json`` record next to it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(result.coordinates, columns=["x", "y", "z"])
    if groups is not None:
        frame.insert(0, "group", [groups.get(i, "") for i in result.ids])
    frame.insert(0, "id", list(result.ids))
    frame.to_csv(path, index=False, lineterminator="\n", float_format="%.12g")
    quality_path = path.with_name(f"{path.stem}.quality.json")
    quality = {
        "stress": result.stress,
        "truncated_mass": result.truncated_mass,
        "eigenvalues": result.eigenvalues,
    }
    quality_path.write_text(dumps(quality), encoding="utf-8")
    return path, quality_path


def write_distance_matrix(matrix: DistanceMatrix, path: str | Path) -> Path:
    """Write a labeled square CSV."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    matrix.to_frame().to_csv(path, lineterminator="\n", float_format="%.12g")
    return path
