"""The Ultra Tools module.

Every computation here only compares stored distances, so its guarantees hold exactly
in floating point.

This module provides the following functions:
- ball_partition_check
- closed_ball
- extend_lipschitz
- is_ultrametric
- retraction
- sphere
- verify_lipschitz
"""

__all__ = [
    "ball_partition_check",
    "closed_ball",
    "extend_lipschitz",
    "is_ultrametric",
    "retraction",
    "sphere",
    "verify_lipschitz",
]

import logging
from collections.abc import Sequence

import numpy as np

from holdermap.exceptions import (
    EmptySubsetError,
    InvalidInputError,
    NotLipschitzOnSubsetError,
    NotUltrametricError,
)
from holdermap.metric_core import distance_matrix
from holdermap.schemas.metric import FiniteMetricSpace, MetricSample
from holdermap.schemas.ultrametric import LipschitzCheck, MapTable, UltrametricCheck

LOGGER = logging.getLogger(__name__)


def is_ultrametric(sample: MetricSample) -> UltrametricCheck:
    """Check d(x, y) <= max(d(x, z), d(y, z)) on every triple.

    Args:
        sample: A space or point cloud.

    Returns:
        The outcome, with the first failing triple.
    """
    dist = distance_matrix(sample)
    for z in range(len(dist)):
        hits = np.argwhere(dist > np.maximum(dist[:, z, None], dist[None, z, :]))
        if hits.size:
            return UltrametricCheck(
                is_ultrametric=False, witness=(int(hits[0][0]), int(hits[0][1]), z)
            )
    return UltrametricCheck(is_ultrametric=True)


def _require_ultrametric(sample: MetricSample) -> None:
    check = is_ultrametric(sample)
    if not check.is_ultrametric:
        raise NotUltrametricError(check.witness)


def closed_ball(sample: MetricSample, center: int, r: float) -> frozenset[int]:
    """Points y with d(center, y) <= r.

    Args:
        sample: A space or point cloud.
        center: Index of the center.
        r: Radius.

    Returns:
        Indices of the ball's points.
    """
    return frozenset(np.flatnonzero(sample.distances_from(center) <= r).tolist())


def sphere(sample: MetricSample, center: int, r: float) -> frozenset[int]:
    """Points y with d(center, y) = r.

    Args:
        sample: A space or point cloud.
        center: Index of the center.
        r: Radius.

    Returns:
        Indices of the sphere's points.
    """
    return frozenset(np.flatnonzero(sample.distances_from(center) == r).tolist())


def retraction(space: FiniteMetricSpace, subset: Sequence[int]) -> MapTable:
    """A Lipschitz-1 map of an ultrametric space onto a subset, fixing it pointwise.

    A point x outside A goes to the lowest-index point of A on the sphere
    S(x, dist(x, A)). Spheres are keyed by their point sets, so equal spheres reached
    from different centers share one image.

    Args:
        space: An ultrametric space.
        subset: Indices of A.

    Returns:
        The retraction as a self-map of the space.

    Raises:
        EmptySubsetError: If A is empty.
        InvalidInputError: If an index of A is out of range.
        NotUltrametricError: If the space is not ultrametric.
    """
    targets = sorted(set(subset))
    if not targets:
        raise EmptySubsetError("Cannot retract onto an empty subset")
    if targets[0] < 0 or targets[-1] >= space.size:
        raise InvalidInputError(f"Subset {list(subset)} leaves 0..{space.size - 1}")
    _require_ultrametric(space)
    members = set(targets)
    representatives: dict[frozenset[int], int] = {}
    image = []
    for x in range(space.size):
        if x in members:
            image.append(x)
            continue
        radius = float(space.distances_from(x)[targets].min())
        shell = sphere(space, x, radius)
        if shell not in representatives:
            representatives[shell] = min(shell & members)
        image.append(representatives[shell])
    LOGGER.debug(
        "Retraction onto %d of %d points uses %d spheres", len(targets), space.size, len(representatives)
    )
    return MapTable(domain=space, codomain=space, image=tuple(image))


def verify_lipschitz(f: MapTable, bound: float) -> LipschitzCheck:
    """Compare the worst ratio d(f(x), f(y)) / d(x, y) with a constant, inclusively.

    Args:
        f: The map.
        bound: Lipschitz constant L.

    Returns:
        Whether the worst ratio is at most L, with the pair attaining it.
    """
    image = np.asarray(f.image, dtype=np.intp)
    worst, witness = 0.0, None
    for x in range(len(image) - 1):
        spread = f.domain.distances_from(x)[x + 1 :]
        moved = f.codomain.distances_from(int(image[x]))[image[x + 1 :]]
        ratios = moved / spread
        k = int(np.argmax(ratios))
        if witness is None or ratios[k] > worst:
            worst, witness = float(ratios[k]), (x, x + 1 + k)
    return LipschitzCheck(holds=worst <= bound, worst_ratio=worst, witness=witness, bound=bound)


def extend_lipschitz(
    space: FiniteMetricSpace, subset: Sequence[int], f: MapTable, bound: float
) -> MapTable:
    """Extend an L-Lipschitz map on A to the whole ultrametric space as f o g.

    Args:
        space: An ultrametric space X.
        subset: Indices of A, in the order of f's domain.
        f: The map on the subspace A.
        bound: Lipschitz constant L of f.

    Returns:
        A map on X, equal to f on A and L-Lipschitz.

    Raises:
        InvalidInputError: If f's domain does not match A.
        NotLipschitzOnSubsetError: If f is not L-Lipschitz.
        NotUltrametricError: If X is not ultrametric.
    """
    subset = [int(x) for x in subset]
    if f.domain.size != len(subset) or len(set(subset)) != len(subset):
        raise InvalidInputError("The map's domain must list the subset's points once each")
    check = verify_lipschitz(f, bound)
    if not check.holds:
        first, second = check.witness
        raise NotLipschitzOnSubsetError(
            (subset[first], subset[second]), check.worst_ratio, bound
        )
    retract = retraction(space, subset)
    position = {point: k for k, point in enumerate(subset)}
    image = tuple(f.image[position[x]] for x in retract.image)
    return MapTable(domain=space, codomain=f.codomain, image=image)


def ball_partition_check(space: FiniteMetricSpace, r: float) -> bool:
    """Check that any two closed r-balls are disjoint or equal.

    The distinct balls cover the space, so they are pairwise disjoint exactly when their
    sizes add up to the number of points.

    Args:
        space: An ultrametric space.
        r: Radius.

    Returns:
        Whether the balls partition the space.

    Raises:
        NotUltrametricError: If the space is not ultrametric.
    """
    _require_ultrametric(space)
    balls = {closed_ball(space, x, r) for x in range(space.size)}
    return sum(len(x) for x in balls) == space.size
