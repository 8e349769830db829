"""The Metric Core module.

This module provides the following functions:
- diameter
- distance_matrix
- distance_to_set
- format_csv
- from_points
- gapped_union
- min_distance
- read_cloud_json
- read_csv
- read_json
- read_sample
- scale
- subspace
- validate
- write_cloud_json
- write_csv
- write_json
"""

__all__ = [
    "diameter",
    "distance_matrix",
    "distance_to_set",
    "format_csv",
    "from_points",
    "gapped_union",
    "min_distance",
    "read_cloud_json",
    "read_csv",
    "read_json",
    "read_sample",
    "scale",
    "subspace",
    "validate",
    "write_cloud_json",
    "write_csv",
    "write_json",
]

import json
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
from pydantic import ValidationError

from holdermap.exceptions import (
    DuplicatePointError,
    GapTooSmallError,
    InvalidInputError,
    MalformedFileError,
    NonPositiveScaleError,
)
from holdermap.schemas.metric import FiniteMetricSpace, MetricSample, PointCloud, coincident_rows

LOGGER = logging.getLogger(__name__)
# Rounded norms of collinear points may break an exact triangle comparison by an ulp.
POINTS_RTOL = 8 * np.finfo(np.float64).eps


def _read_only(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def validate(
    matrix: Union[Sequence[Sequence[float]], np.ndarray],
    labels: Optional[Sequence[str]] = None,
    rtol: float = 0.0,
) -> FiniteMetricSpace:
    """Build a FiniteMetricSpace, checking every metric axiom.

    Args:
        matrix: Square matrix of distances.
        labels: Point identifiers, defaulting to the row indices.
        rtol: Relative slack allowed in the triangle inequality.

    Returns:
        The validated space.

    Raises:
        InvalidInputError: If the input is not a numeric square matrix, or any of the
            witness-carrying subclasses for the axiom it breaks.
    """
    try:
        return FiniteMetricSpace.model_validate(
            {"labels": list(labels or []), "dist": matrix}, context={"rtol": rtol}
        )
    except ValidationError as err:
        raise InvalidInputError(err) from err


def from_points(cloud: PointCloud) -> FiniteMetricSpace:
    """Materialise the distance matrix of a point cloud.

    Args:
        cloud: Distinct points and the norm to measure them with.

    Returns:
        The metric space of the cloud, keeping its coordinates.

    Raises:
        DuplicatePointError: If two points coincide.
    """
    if witness := coincident_rows(cloud.points):
        raise DuplicatePointError(*witness)
    matrix = distance_matrix(cloud)
    # Exact symmetry, whatever the evaluation order of the norm.
    matrix = np.minimum(matrix, matrix.T)
    return FiniteMetricSpace.model_validate(
        {"dist": matrix, "points": cloud.points}, context={"rtol": POINTS_RTOL}
    )


def distance_matrix(sample: MetricSample) -> np.ndarray:
    """All pairwise distances of a sample.

    Args:
        sample: A space or point cloud.

    Returns:
        The n x n distance matrix.
    """
    if isinstance(sample, FiniteMetricSpace):
        return sample.dist
    if sample.size == 0:
        return np.zeros((0, 0))
    return np.vstack([sample.distances_from(i) for i in range(sample.size)])


def diameter(sample: MetricSample) -> float:
    """Largest distance in a sample, 0 for a single point.

    Args:
        sample: A space or point cloud.

    Returns:
        The diameter.
    """
    if isinstance(sample, FiniteMetricSpace):
        return float(sample.dist.max(initial=0.0))
    if isinstance(sample, PointCloud) and sample.arity == 1:
        return float(np.ptp(sample.points[:, 0])) if sample.size else 0.0
    return max((float(sample.distances_from(i).max()) for i in range(sample.size)), default=0.0)


def min_distance(sample: MetricSample) -> float:
    """Smallest positive distance in a sample, infinite for a single point.

    Args:
        sample: A space or point cloud.

    Returns:
        The minimum positive distance.
    """
    if isinstance(sample, PointCloud) and sample.arity == 1:
        gaps = np.diff(np.sort(sample.points[:, 0]))
        gaps = gaps[gaps > 0]
        return float(gaps.min()) if gaps.size else float("inf")
    best = float("inf")
    for i in range(sample.size):
        row = sample.distances_from(i)
        row = row[row > 0]
        if row.size:
            best = min(best, float(row.min()))
    return best


def distance_to_set(sample: MetricSample, index: int, subset: Sequence[int]) -> float:
    """dist(x, A) for a point x and a set A of points.

    Args:
        sample: A space or point cloud.
        index: The point x.
        subset: Indices of A.

    Returns:
        The smallest distance from x to a point of A.
    """
    return float(sample.distances_from(index)[list(subset)].min())


def scale(space: FiniteMetricSpace, r: float) -> FiniteMetricSpace:
    """The copy rX of a space with every distance multiplied by r.

    Args:
        space: The space to scale.
        r: Positive factor.

    Returns:
        The scaled space, with coordinates scaled alike.

    Raises:
        NonPositiveScaleError: If r is not positive.
    """
    if not r > 0:
        raise NonPositiveScaleError(f"Scale factor must be positive, got {r!r}")
    points = None if space.points is None else _read_only(space.points * r)
    return FiniteMetricSpace.model_construct(
        labels=list(space.labels), dist=_read_only(space.dist * r), points=points
    )


def subspace(space: FiniteMetricSpace, indices: Sequence[int]) -> FiniteMetricSpace:
    """The metric subspace on the given points, in the given order.

    Args:
        space: The ambient space.
        indices: Distinct point indices.

    Returns:
        The induced subspace.

    Raises:
        InvalidInputError: If indices repeat or fall outside the space.
    """
    indices = list(indices)
    if len(set(indices)) != len(indices) or any(not 0 <= x < space.size for x in indices):
        raise InvalidInputError(f"Invalid subspace indices {indices}")
    points = None if space.points is None else _read_only(space.points[indices])
    return FiniteMetricSpace.model_construct(
        labels=[space.labels[x] for x in indices],
        dist=_read_only(space.dist[np.ix_(indices, indices)]),
        points=points,
    )


def gapped_union(
    parts: Sequence[FiniteMetricSpace], gap: float
) -> tuple[FiniteMetricSpace, list[int]]:
    """Disjoint union of spaces, every cross-part distance equal to `gap`.

    Args:
        parts: The spaces to join.
        gap: Distance between points of different parts.

    Returns:
        The union and, for every point, the index of the part it came from.

    Raises:
        InvalidInputError: If no parts are given or the gap is not positive.
        GapTooSmallError: If the gap is below the largest part diameter.
    """
    if not parts:
        raise InvalidInputError("Gapped union needs at least one part")
    required = max(diameter(x) for x in parts)
    if not gap > 0:
        raise InvalidInputError(f"Gap must be positive, got {gap!r}")
    if gap < required:
        raise GapTooSmallError(gap=gap, required=required)
    total = sum(x.size for x in parts)
    matrix = np.full((total, total), float(gap))
    labels, owners = [], []
    offset = 0
    for index, part in enumerate(parts):
        block = slice(offset, offset + part.size)
        matrix[block, block] = part.dist
        labels.extend(f"{index}:{x}" for x in part.labels)
        owners.extend([index] * part.size)
        offset += part.size
    LOGGER.debug("Joined %d parts into %d points at gap %r", len(parts), total, gap)
    return validate(matrix, labels), owners


def read_csv(path: Path) -> FiniteMetricSpace:
    """Read a distance matrix: a line with n, then n comma-separated rows.

    Args:
        path: File to read.

    Returns:
        The validated space, labelled by index.

    Raises:
        MalformedFileError: If the file does not follow the format.
    """
    lines = [x.strip() for x in path.read_text(encoding="utf-8").splitlines()]
    if not lines or not lines[0]:
        raise MalformedFileError(path, "Missing point count", line=1)
    try:
        count = int(lines[0])
    except ValueError as err:
        raise MalformedFileError(path, f"Point count {lines[0]!r} is not an integer", line=1) from err
    rows = [(number, x) for number, x in enumerate(lines[1:], start=2) if x]
    if len(rows) != count:
        raise MalformedFileError(path, f"Expected {count} rows, found {len(rows)}")
    matrix = []
    for line_number, row in rows:
        cells = row.split(",")
        if len(cells) != count:
            raise MalformedFileError(
                path, f"Expected {count} cells, found {len(cells)}", line=line_number
            )
        values = []
        for column, cell in enumerate(cells):
            try:
                values.append(float(cell))
            except ValueError as err:
                raise MalformedFileError(
                    path, f"Cell {cell.strip()!r} is not a number", line=line_number, field=str(column)
                ) from err
        matrix.append(values)
    LOGGER.debug("Read %d-point matrix from %s", count, path)
    return validate(matrix)


def format_csv(space: FiniteMetricSpace) -> str:
    """Render a distance matrix in the CSV format read by `read_csv`.

    Args:
        space: The space to render.

    Returns:
        The point count line followed by one line per row.
    """
    lines = [str(space.size)]
    lines.extend(",".join(repr(float(x)) for x in row) for row in space.dist)
    return "\n".join(lines) + "\n"


def write_csv(space: FiniteMetricSpace, path: Path) -> None:
    """Write a distance matrix in the CSV format read by `read_csv`.

    Args:
        space: The space to write.
        path: Destination file.
    """
    path.write_text(format_csv(space), encoding="utf-8")


def _load_json(path: Path) -> dict[str, Any]:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise MalformedFileError(path, err.msg, line=err.lineno) from err
    if not isinstance(data, dict):
        raise MalformedFileError(path, "Top level must be a JSON object")
    return data


def read_json(path: Path) -> FiniteMetricSpace:
    """Read a space stored as {"labels": [...], "dist": [[...]], "points": optional}.

    Args:
        path: File to read.

    Returns:
        The validated space.

    Raises:
        MalformedFileError: If a key is missing or has the wrong shape.
    """
    data = _load_json(path)
    if "dist" not in data:
        raise MalformedFileError(path, "Missing key", field="dist")
    try:
        return FiniteMetricSpace.model_validate(data)
    except ValidationError as err:
        field = ".".join(str(x) for x in err.errors()[0]["loc"]) or None
        raise MalformedFileError(path, str(err), field=field) from err


def write_json(space: FiniteMetricSpace, path: Path) -> None:
    """Write a space in the JSON format read by `read_json`.

    Args:
        space: The space to write.
        path: Destination file.
    """
    path.write_text(space.model_dump_json(indent=2, exclude_none=True) + "\n", encoding="utf-8")


def read_cloud_json(path: Path) -> PointCloud:
    """Read a cloud stored as {"points": [[...]], "metric_kind": "euclidean"}.

    Args:
        path: File to read.

    Returns:
        The point cloud.

    Raises:
        MalformedFileError: If the points are missing or malformed.
    """
    data = _load_json(path)
    if "points" not in data:
        raise MalformedFileError(path, "Missing key", field="points")
    try:
        return PointCloud.model_validate(data)
    except ValidationError as err:
        field = ".".join(str(x) for x in err.errors()[0]["loc"]) or None
        raise MalformedFileError(path, str(err), field=field) from err


def write_cloud_json(cloud: PointCloud, path: Path) -> None:
    """Write a cloud in the JSON format read by `read_cloud_json`.

    Args:
        cloud: The cloud to write.
        path: Destination file.
    """
    path.write_text(cloud.model_dump_json(indent=2) + "\n", encoding="utf-8")


def read_sample(path: Path) -> Union[FiniteMetricSpace, PointCloud]:
    """Read whichever sample a file holds.

    CSV files are distance matrices; JSON files with a "dist" key are spaces and JSON
    files with only "points" are clouds.

    Args:
        path: File to read.

    Returns:
        A space or a cloud.

    Raises:
        MalformedFileError: If the file is neither.
    """
    if path.suffix.lower() == ".csv":
        return read_csv(path)
    data = _load_json(path)
    if "dist" not in data and "points" in data:
        return read_cloud_json(path)
    return read_json(path)
