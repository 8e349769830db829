"""The Chain Energy module.

This module provides the following functions:
- ordered_chain
- prefix_energies
- z_bruteforce
- z_dp
"""

__all__ = ["ordered_chain", "prefix_energies", "z_bruteforce", "z_dp"]

import itertools
import logging
from collections.abc import Sequence
from typing import Union

import numpy as np

from holdermap.exceptions import (
    EmptyOrderError,
    InvalidInputError,
    InvalidOrderError,
    TooManyPointsError,
)
from holdermap.schemas.chain import OrderedChain
from holdermap.schemas.metric import FiniteMetricSpace, MetricSample, PointCloud

LOGGER = logging.getLogger(__name__)
BRUTEFORCE_MAX_POINTS = 20


def _check_order(order: Sequence[int], size: int, s: float) -> np.ndarray:
    if not s > 0:
        raise InvalidInputError(f"Exponent must be positive, got {s!r}")
    if len(order) == 0:
        raise EmptyOrderError("Chain energy needs at least one point")
    indices = np.asarray(order, dtype=np.intp)
    if len(set(indices.tolist())) != len(indices) or indices.min() < 0 or indices.max() >= size:
        raise InvalidOrderError(f"Order {list(order)} repeats or leaves 0..{size - 1}")
    return indices


def prefix_energies(sample: MetricSample, order: Sequence[int], s: float) -> np.ndarray:
    """Z^s of every prefix of an ordered sequence, from one pass of the chain recurrence.

    Entry j is the longest-chain value from the first point to the j-th one:
    L[0] = 0 and L[j] = max over i < j of L[i] + d(x_i, x_j)^s.

    Args:
        sample: A space or point cloud.
        order: Distinct point indices; need not cover every point.
        s: Positive exponent.

    Returns:
        The prefix values, nondecreasing.

    Raises:
        EmptyOrderError: If the order is empty.
        InvalidInputError: If s is not positive.
        InvalidOrderError: If an index repeats or is out of range.
    """
    indices = _check_order(order, sample.size, s)
    energies = np.zeros(len(indices))
    for j in range(1, len(indices)):
        steps = np.power(sample.distances_from(int(indices[j]))[indices[:j]], s)
        energies[j] = np.max(energies[:j] + steps)
    return energies


def z_dp(sample: MetricSample, order: Sequence[int], s: float) -> float:
    """Chain energy Z^s of an ordered sequence, in O(n^2).

    Args:
        sample: A space or point cloud.
        order: Distinct point indices, first to last.
        s: Positive exponent.

    Returns:
        The largest sum of d^s over index chains from the first to the last point.

    Raises:
        EmptyOrderError: If the order is empty.
        InvalidOrderError: If an index repeats or is out of range.
    """
    return float(prefix_energies(sample, order, s)[-1])


def z_bruteforce(
    sample: MetricSample, order: Sequence[int], s: float, max_points: int = BRUTEFORCE_MAX_POINTS
) -> float:
    """Chain energy by enumerating every chain through the interior points.

    Args:
        sample: A space or point cloud.
        order: Distinct point indices, first to last.
        s: Positive exponent.
        max_points: Largest order accepted.

    Returns:
        The same value as `z_dp`.

    Raises:
        EmptyOrderError: If the order is empty.
        InvalidOrderError: If an index repeats or is out of range.
        TooManyPointsError: If the order is longer than `max_points`.
    """
    indices = _check_order(order, sample.size, s)
    count = len(indices)
    if count > max_points:
        raise TooManyPointsError(count, max_points)
    if count == 1:
        return 0.0
    weights = {
        (i, j): sample.distance(int(indices[i]), int(indices[j])) ** s
        for i in range(count)
        for j in range(i + 1, count)
    }
    best = 0.0
    interior = range(1, count - 1)
    for size in range(count - 1):
        for middle in itertools.combinations(interior, size):
            chain = (0, *middle, count - 1)
            best = max(best, sum(weights[pair] for pair in zip(chain, chain[1:])))
    return best


def ordered_chain(
    space: Union[FiniteMetricSpace, PointCloud], order: Sequence[int], s: float
) -> OrderedChain:
    """Pair a full ordering of a space with its chain energy.

    Args:
        space: The points being ordered.
        order: A permutation of the point indices.
        s: Positive exponent.

    Returns:
        The ordering and its cached Z^s value.
    """
    return OrderedChain(space=space, order=tuple(order), s=s, value=z_dp(space, order, s))
