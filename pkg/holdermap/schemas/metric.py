"""The Metric module.

This module provides the following classes:
- FiniteMetricSpace
- MetricKind
- MetricSample
- PointCloud
- SpaceSummary
"""

__all__ = ["FiniteMetricSpace", "MetricKind", "MetricSample", "PointCloud", "SpaceSummary"]

from enum import Enum
from typing import Any, Optional, Protocol, runtime_checkable

import numpy as np
from pydantic import Field, ValidationInfo, field_validator, model_validator

from holdermap.exceptions import (
    AsymmetricMatrixError,
    DuplicatePointError,
    InvalidInputError,
    NegativeDistanceError,
    TriangleViolationError,
)
from holdermap.schemas import BaseModel, FloatArray


@runtime_checkable
class MetricSample(Protocol):
    """Anything that can report distances between its indexed points."""

    @property
    def size(self) -> int:
        """Number of points."""

    def distances_from(self, index: int) -> np.ndarray:
        """Distances from one point to every point, in index order."""

    def distance(self, i: int, j: int) -> float:
        """Distance between two points."""


class MetricKind(str, Enum):
    """Enum class for the norms a PointCloud can be measured with."""

    EUCLIDEAN = "euclidean"
    """"""
    CHEBYSHEV = "chebyshev"
    """"""


def _first_witness(mask: np.ndarray) -> Optional[tuple[int, int]]:
    hits = np.argwhere(mask)
    if hits.size == 0:
        return None
    return int(hits[0][0]), int(hits[0][1])


def coincident_rows(points: np.ndarray) -> Optional[tuple[int, int]]:
    """First pair of equal rows, the earlier index first.

    Args:
        points: Array of shape (n, d).

    Returns:
        The pair of indices, or None when all rows differ.
    """
    if len(points) < 2:
        return None
    _, first, inverse = np.unique(points, axis=0, return_index=True, return_inverse=True)
    for index, group in enumerate(np.ravel(inverse)):
        if first[group] != index:
            return int(first[group]), index
    return None


def check_distance_matrix(dist: np.ndarray, rtol: float = 0.0) -> None:
    """Raise on the first metric axiom the matrix breaks.

    Args:
        dist: Square matrix of distances.
        rtol: Relative slack allowed in the triangle inequality.

    Raises:
        InvalidInputError: If the matrix is not square or its diagonal is not zero.
        NegativeDistanceError: If an entry is negative or not finite.
        AsymmetricMatrixError: If d(i, j) != d(j, i).
        DuplicatePointError: If an off-diagonal entry is zero.
        TriangleViolationError: If d(i, j) > d(i, k) + d(k, j).
    """
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise InvalidInputError(f"Distance matrix must be square, got shape {dist.shape}")
    if witness := _first_witness(~np.isfinite(dist) | (dist < 0)):
        raise NegativeDistanceError(*witness)
    if np.any(np.diag(dist) != 0):
        index = int(np.flatnonzero(np.diag(dist))[0])
        raise InvalidInputError(f"Distance of point {index} to itself is not zero")
    if witness := _first_witness(np.triu(dist != dist.T)):
        raise AsymmetricMatrixError(*witness)
    off_diagonal = ~np.eye(len(dist), dtype=bool)
    if witness := _first_witness(np.triu((dist == 0) & off_diagonal)):
        raise DuplicatePointError(*witness)
    for k in range(len(dist)):
        through_k = dist[:, k, None] + dist[None, k, :]
        if witness := _first_witness(dist > through_k * (1 + rtol)):
            raise TriangleViolationError(witness[0], witness[1], k)


class FiniteMetricSpace(BaseModel):
    """A finite metric space given by its labelled distance matrix.

    Construction validates every metric axiom; pass `context={"rtol": ...}` to
    `model_validate` to allow a relative slack in the triangle inequality.

    Attributes:
        labels: Point identifiers, one per row.
        dist: Symmetric matrix of pairwise distances.
        points: Coordinates the distances were computed from, if any.
    """

    labels: list[str] = Field(default_factory=list)
    dist: FloatArray
    points: Optional[FloatArray] = None

    @model_validator(mode="before")
    @classmethod
    def default_labels(cls, data: Any) -> Any:
        """Label points by their index when no labels are given.

        Args:
            data: Raw constructor input.

        Returns:
            The input with labels filled in.
        """
        if isinstance(data, dict) and not data.get("labels") and "dist" in data:
            data = {**data, "labels": [str(i) for i in range(len(data["dist"]))]}
        return data

    @model_validator(mode="after")
    def check_metric(self, info: ValidationInfo) -> "FiniteMetricSpace":
        """Enforce the metric axioms on the stored matrix.

        Args:
            info: Validation info carrying an optional `rtol` context entry.

        Returns:
            The validated space.

        Raises:
            InvalidInputError: If labels and matrix disagree in size.
        """
        rtol = (info.context or {}).get("rtol", 0.0)
        check_distance_matrix(self.dist, rtol=rtol)
        if len(self.labels) != len(self.dist):
            raise InvalidInputError(
                f"{len(self.labels)} labels given for {len(self.dist)} points"
            )
        return self

    @property
    def size(self) -> int:
        """Number of points."""
        return len(self.labels)

    def distances_from(self, index: int) -> np.ndarray:
        """Row of the distance matrix.

        Args:
            index: Point index.

        Returns:
            Distances from the point to every point.
        """
        return self.dist[index]

    def distance(self, i: int, j: int) -> float:
        """Distance between two points.

        Args:
            i: First point index.
            j: Second point index.

        Returns:
            The stored distance.
        """
        return float(self.dist[i, j])


class PointCloud(BaseModel):
    """Points in R^d measured with a fixed norm.

    Attributes:
        points: Array of shape (n, d), one row per point.
        metric_kind: Norm used for distances.
    """

    points: FloatArray
    metric_kind: MetricKind = MetricKind.EUCLIDEAN

    @field_validator("points")
    def as_rows(cls, value: np.ndarray) -> np.ndarray:
        """Reshape a flat list of reals into one-coordinate rows.

        Args:
            value: The converted array.

        Returns:
            An (n, d) array of distinct rows.

        Raises:
            InvalidInputError: If the rows do not share an arity of at least 1.
            DuplicatePointError: If two rows coincide.
        """
        if value.ndim == 1:
            value = value.reshape(-1, 1)
        if value.ndim != 2 or (value.size and value.shape[1] < 1):
            raise InvalidInputError("Points must be tuples of one common arity >= 1")
        if not np.all(np.isfinite(value)):
            raise InvalidInputError("Point coordinates must be finite")
        if witness := coincident_rows(value):
            raise DuplicatePointError(*witness)
        value.flags.writeable = False
        return value

    @property
    def size(self) -> int:
        """Number of points."""
        return len(self.points)

    @property
    def arity(self) -> int:
        """Dimension d of the ambient space."""
        return self.points.shape[1]

    def _norm(self, diff: np.ndarray) -> np.ndarray:
        if self.arity == 1:
            return np.abs(diff[:, 0])
        if self.metric_kind is MetricKind.CHEBYSHEV:
            return np.abs(diff).max(axis=1)
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def distances_from(self, index: int) -> np.ndarray:
        """Distances from one point to every point.

        Args:
            index: Point index.

        Returns:
            Distances in index order.
        """
        return self._norm(self.points - self.points[index])

    def distance(self, i: int, j: int) -> float:
        """Distance between two points.

        Args:
            i: First point index.
            j: Second point index.

        Returns:
            The norm of their difference.
        """
        return float(self._norm(self.points[[j]] - self.points[i])[0])


class SpaceSummary(BaseModel):
    """Headline numbers of a validated space.

    Attributes:
        size: Number of points.
        diameter: Largest distance.
        min_distance: Smallest positive distance, absent for a single point.
        ultrametric: Whether the strong triangle inequality holds.
    """

    size: int
    diameter: float
    min_distance: Optional[float] = None
    ultrametric: bool
