"""The Fractal Gen module.

Deterministic samples of the classical example spaces, each with a known dimension.

This module provides the following functions:
- attractor_box
- cantor_endpoints
- carpet_sample
- check_separation
- ifs_sample
- mcmullen_ubdim
- middle_c_cantor_spec
- random_cloud
- random_tree_space
- ultrametric_tree_space
- uniform_grid
"""

__all__ = [
    "attractor_box",
    "cantor_endpoints",
    "carpet_sample",
    "check_separation",
    "ifs_sample",
    "mcmullen_ubdim",
    "middle_c_cantor_spec",
    "random_cloud",
    "random_tree_space",
    "ultrametric_tree_space",
    "uniform_grid",
]

import logging
import math
from collections.abc import Sequence
from fractions import Fraction
from typing import Union

import numpy as np

from holdermap.exceptions import (
    DepthTooLargeError,
    InvalidInputError,
    NonDecreasingDiametersError,
    SscViolationError,
    TooManyPointsError,
)
from holdermap.schemas.fractal import CarpetSpec, IfsSpec, SimilarityMap
from holdermap.schemas.metric import FiniteMetricSpace, PointCloud

LOGGER = logging.getLogger(__name__)
MAX_CANTOR_DEPTH = 20
MAX_GENERATED_POINTS = 10**6
MAX_TREE_LEAVES = 10**5


def cantor_endpoints(
    depth: int, hole: Union[Fraction, str, float] = Fraction(1, 3), max_depth: int = MAX_CANTOR_DEPTH
) -> PointCloud:
    """Endpoints of the intervals left after `depth` steps of the middle-c construction.

    Every step removes the open middle part of relative length `hole` from each interval,
    starting from [0, 1]. Coordinates are exact rationals until the final conversion.

    Args:
        depth: Number of construction steps.
        hole: Relative length c of the removed middle part, in (0, 1).
        max_depth: Largest depth accepted.

    Returns:
        The 2^(depth+1) endpoints in increasing order.

    Raises:
        InvalidInputError: If depth is negative or hole is outside (0, 1).
        DepthTooLargeError: If depth exceeds `max_depth`.
    """
    hole = Fraction(hole)
    if depth < 0 or not 0 < hole < 1:
        raise InvalidInputError(f"Need depth >= 0 and hole in (0, 1), got {depth}, {hole}")
    if depth > max_depth:
        raise DepthTooLargeError(f"Depth {depth} exceeds the limit of {max_depth}")
    keep = (1 - hole) / 2
    intervals = [(Fraction(0), Fraction(1))]
    for _ in range(depth):
        intervals = [
            part
            for left, right in intervals
            for part in ((left, left + keep * (right - left)), (right - keep * (right - left), right))
        ]
    endpoints = [float(x) for interval in intervals for x in interval]
    LOGGER.debug("Cantor depth %d with hole %s: %d endpoints", depth, hole, len(endpoints))
    return PointCloud(points=endpoints)


def middle_c_cantor_spec(hole: Union[Fraction, float] = Fraction(1, 3)) -> IfsSpec:
    """The two-map system whose attractor is the middle-c Cantor set.

    Args:
        hole: Relative length c of the removed middle part, in (0, 1).

    Returns:
        Maps of ratio (1 - c) / 2 at translations 0 and (1 + c) / 2.
    """
    hole = Fraction(hole)
    ratio = float((1 - hole) / 2)
    return IfsSpec(
        maps=[
            SimilarityMap(ratio=ratio, translation=(0.0,)),
            SimilarityMap(ratio=ratio, translation=(float((1 + hole) / 2),)),
        ]
    )


def attractor_box(spec: IfsSpec) -> tuple[np.ndarray, np.ndarray]:
    """Smallest axis-parallel box containing the attractor.

    Per coordinate the attractor's extremes are the extreme fixed points t / (1 - r)
    of the maps.

    Args:
        spec: The function system.

    Returns:
        Lower and upper corners of the box.
    """
    fixed = np.array([np.array(x.translation) / (1 - x.ratio) for x in spec.maps])
    return fixed.min(axis=0), fixed.max(axis=0)


def check_separation(spec: IfsSpec) -> None:
    """Require the first-level images of the attractor box to be pairwise disjoint.

    Args:
        spec: The function system.

    Raises:
        SscViolationError: With the first pair of maps whose box images meet.
    """
    low, high = attractor_box(spec)
    boxes = [
        (x.ratio * low + np.array(x.translation), x.ratio * high + np.array(x.translation))
        for x in spec.maps
    ]
    for i, (low_i, high_i) in enumerate(boxes):
        for j in range(i + 1, len(boxes)):
            low_j, high_j = boxes[j]
            if not np.any((high_i < low_j) | (high_j < low_i)):
                raise SscViolationError(i, j)


def _check_count(count: int, max_points: int) -> None:
    if count > max_points:
        raise TooManyPointsError(count, max_points)


def ifs_sample(spec: IfsSpec, depth: int, max_points: int = MAX_GENERATED_POINTS) -> PointCloud:
    """One representative per depth-level cylinder of a separated function system.

    The representative of the cylinder f_w1 o ... o f_wk(K) is the image of the
    attractor box's lower corner; points are listed in lexicographic word order.

    Args:
        spec: The function system.
        depth: Word length k.
        max_points: Largest sample accepted.

    Returns:
        m^depth distinct points.

    Raises:
        SscViolationError: If the system fails the separation check.
        TooManyPointsError: If m^depth exceeds `max_points`.
    """
    check_separation(spec)
    _check_count(len(spec.maps) ** depth, max_points)
    low, _ = attractor_box(spec)
    points = low.reshape(1, -1)
    for _ in range(depth):
        points = np.concatenate([x.ratio * points + np.array(x.translation) for x in spec.maps])
    return PointCloud(points=points)


def carpet_sample(spec: CarpetSpec, depth: int, max_points: int = MAX_GENERATED_POINTS) -> PointCloud:
    """Lower-left corners of the depth-level rectangles of a Bedford-McMullen carpet.

    Args:
        spec: The carpet pattern.
        depth: Number of subdivision steps.
        max_points: Largest sample accepted.

    Returns:
        |D|^depth points in the unit square.

    Raises:
        TooManyPointsError: If |D|^depth exceeds `max_points`.
    """
    _check_count(len(spec.pattern) ** depth, max_points)
    divisor = np.array([spec.n, spec.m], dtype=float)
    points = np.zeros((1, 2))
    for _ in range(depth):
        points = np.concatenate(
            [(points + np.array(cell, dtype=float)) / divisor for cell in spec.pattern]
        )
    return PointCloud(points=points)


def mcmullen_ubdim(spec: CarpetSpec) -> float:
    """Box dimension of a carpet, log_m |pi(D)| + log_n (|D| / |pi(D)|).

    Args:
        spec: The carpet pattern.

    Returns:
        The upper box dimension.
    """
    rows = len(spec.rows)
    return math.log(rows) / math.log(spec.m) + math.log(len(spec.pattern) / rows) / math.log(spec.n)


def ultrametric_tree_space(
    arities: Sequence[int], level_diams: Sequence[float], max_leaves: int = MAX_TREE_LEAVES
) -> FiniteMetricSpace:
    """Leaves of a rooted tree, two leaves at the diameter of their lowest common ancestor.

    Args:
        arities: Number of children at each level, root first.
        level_diams: Distance between leaves that split at each level.
        max_leaves: Largest number of leaves accepted.

    Returns:
        An ultrametric space; labels are the leaves' digit paths.

    Raises:
        InvalidInputError: If the lists differ in length or an arity is below 1.
        NonDecreasingDiametersError: If the diameters are not positive and strictly decreasing.
        TooManyPointsError: If the tree has more than `max_leaves` leaves.
    """
    if len(arities) != len(level_diams) or any(x < 1 for x in arities):
        raise InvalidInputError("Need one arity >= 1 per level diameter")
    diams = [float(x) for x in level_diams]
    if any(x <= 0 for x in diams) or any(a <= b for a, b in zip(diams, diams[1:])):
        raise NonDecreasingDiametersError(f"Level diameters {diams} must decrease strictly")
    count = math.prod(arities)
    _check_count(count, max_leaves)
    digits = np.array(np.unravel_index(np.arange(count), tuple(arities))).T.reshape(count, -1)
    matrix = np.zeros((count, count))
    for level in reversed(range(len(arities))):
        column = digits[:, level]
        matrix[column[:, None] != column[None, :]] = diams[level]
    matrix.flags.writeable = False
    labels = [".".join(str(x) for x in row) for row in digits]
    # Distances are exact level values, so the construction is a valid ultrametric.
    return FiniteMetricSpace.model_construct(labels=labels, dist=matrix, points=None)


def uniform_grid(count: int) -> PointCloud:
    """Equally spaced points i / (count - 1) of [0, 1].

    Args:
        count: Number of points, at least 1.

    Returns:
        The grid, in increasing order.

    Raises:
        InvalidInputError: If count is below 1.
    """
    if count < 1:
        raise InvalidInputError(f"Grid needs at least one point, got {count}")
    if count == 1:
        return PointCloud(points=[0.0])
    return PointCloud(points=np.arange(count) / (count - 1))


def random_cloud(count: int, arity: int = 2, seed: int = 0) -> PointCloud:
    """Uniform random points of the unit cube.

    Args:
        count: Number of points.
        arity: Dimension d.
        seed: Seed of the generator.

    Returns:
        The cloud.
    """
    return PointCloud(points=np.random.default_rng(seed).random((count, arity)))


def random_tree_space(max_leaves: int = 64, seed: int = 0) -> FiniteMetricSpace:
    """A random ultrametric tree space with at most `max_leaves` leaves.

    Args:
        max_leaves: Largest number of leaves.
        seed: Seed of the generator.

    Returns:
        The tree space.
    """
    rng = np.random.default_rng(seed)
    arities = []
    for _ in range(int(rng.integers(1, 5))):
        arity = int(rng.integers(1, 4))
        if math.prod(arities) * arity > max_leaves:
            break
        arities.append(arity)
    if not arities or math.prod(arities) < 2:
        arities.append(2)
    diams = [1.0]
    for _ in arities[1:]:
        diams.append(diams[-1] * float(rng.uniform(0.2, 0.8)))
    return ultrametric_tree_space(arities, diams, max_leaves=max(max_leaves, math.prod(arities)))
