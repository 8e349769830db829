"""The Holder Map module.

An ordering x_1, ..., x_n with prefix energies a_i = Z^s(x_1, ..., x_i) gives the map
a_i -> x_i, which is (1/s)-Hölder with constant 1 because a_j - a_i >= d(x_i, x_j)^s.

This module provides the following functions:
- build_parametrization
- chain_value_from_map
- verify_holder
"""

__all__ = ["build_parametrization", "chain_value_from_map", "verify_holder"]

import logging
from collections.abc import Sequence
from typing import Union

import numpy as np

from holdermap.chain_energy import prefix_energies, z_dp
from holdermap.exceptions import InfiniteConstantError, InvalidInputError, VerificationFailureError
from holdermap.schemas.chain import check_permutation
from holdermap.schemas.holder import HolderCertificate, HolderParametrization
from holdermap.schemas.metric import MetricSample, PointCloud

LOGGER = logging.getLogger(__name__)
# Anchor differences lose a few ulps of the larger anchor.
HOLDER_RTOL = 1e-9


def _anchor_values(anchors: Union[PointCloud, Sequence[float]]) -> np.ndarray:
    if isinstance(anchors, PointCloud):
        if anchors.arity != 1:
            raise InvalidInputError("Anchors must be a point cloud in R")
        return anchors.points[:, 0]
    return np.asarray(anchors, dtype=float)


def verify_holder(
    anchors: Union[PointCloud, Sequence[float]],
    target: MetricSample,
    images: Sequence[int],
    alpha: float,
) -> HolderCertificate:
    """Smallest C with d(f(i), f(j)) <= C |a_i - a_j|^alpha over all pairs.

    Args:
        anchors: The domain, as reals or a cloud in R.
        target: The codomain.
        images: Image index of every anchor.
        alpha: Positive exponent.

    Returns:
        The worst ratio and the first pair attaining it.

    Raises:
        InvalidInputError: If anchors and images differ in length.
        InfiniteConstantError: If equal anchors have different images.
    """
    values = _anchor_values(anchors)
    images = np.asarray(images, dtype=np.intp)
    if len(values) != len(images):
        raise InvalidInputError(f"{len(values)} anchors given for {len(images)} images")
    worst, witness = -1.0, None
    for i in range(len(values) - 1):
        gaps = np.abs(values[i + 1 :] - values[i])
        dists = target.distances_from(int(images[i]))[images[i + 1 :]]
        clashes = np.flatnonzero((gaps == 0) & (dists > 0))
        if clashes.size:
            raise InfiniteConstantError((i, i + 1 + int(clashes[0])))
        ratios = np.zeros_like(dists)
        spread = gaps > 0
        ratios[spread] = dists[spread] / gaps[spread] ** alpha
        k = int(np.argmax(ratios))
        if ratios[k] > worst:
            worst, witness = float(ratios[k]), (i, i + 1 + k)
    return HolderCertificate(worst_constant=max(worst, 0.0), witness=witness)


def build_parametrization(
    space: MetricSample, order: Sequence[int], s: float
) -> HolderParametrization:
    """The (1/s)-1-Hölder map from the prefix energies of an order onto the space.

    Args:
        space: A space or point cloud.
        order: A permutation of the point indices.
        s: Positive exponent.

    Returns:
        Anchors a_i = Z^s(x_1, ..., x_i), images x_i, alpha = 1/s and C = 1.

    Raises:
        InvalidInputError: If s is not positive.
        VerificationFailureError: If the constructed map is not 1-Hölder.
    """
    if not s > 0:
        raise InvalidInputError(f"Exponent must be positive, got {s!r}")
    check_permutation(tuple(order), space.size)
    anchors = prefix_energies(space, order, s)
    certificate = verify_holder(anchors, space, order, 1 / s)
    if certificate.worst_constant > 1 + HOLDER_RTOL:
        raise VerificationFailureError(
            f"Parametrization has constant {certificate.worst_constant!r} at {certificate.witness}"
        )
    LOGGER.debug("Parametrization of %d points on [0, %r]", len(anchors), anchors[-1])
    return HolderParametrization(
        anchors=anchors.tolist(),
        images=[int(x) for x in order],
        alpha=1 / s,
        constant=1.0,
        ell=float(anchors[-1]),
    )


def chain_value_from_map(
    space: MetricSample, anchors: Sequence[float], images: Sequence[int], s: float
) -> tuple[tuple[int, ...], float]:
    """Order the points by their first anchor and evaluate Z^s of that order.

    When the map is (1/s)-Hölder with constant 1, the value is at most the span of the
    anchors, so delta^s of the space is at most that span too.

    Args:
        space: The codomain.
        anchors: Reals, one per image.
        images: Image index of every anchor; every point must be hit.
        s: Positive exponent.

    Returns:
        The induced order and its Z^s.

    Raises:
        InvalidInputError: If the map is not onto or the lengths differ.
    """
    if len(anchors) != len(images):
        raise InvalidInputError(f"{len(anchors)} anchors given for {len(images)} images")
    order = []
    seen = set()
    for k in np.argsort(np.asarray(anchors, dtype=float), kind="stable").tolist():
        point = int(images[k])
        if point not in seen:
            seen.add(point)
            order.append(point)
    if len(order) != space.size:
        raise InvalidInputError("The map does not hit every point")
    return tuple(order), z_dp(space, order, s)
