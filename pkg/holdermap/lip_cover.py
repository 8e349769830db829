"""The Lip Cover module.

F(A, B) is the least number of Lipschitz-1 images of A whose union is B. The
enumeration is exhaustive, so only tiny instances are accepted.

This module provides the following functions:
- f_cover_number
- lip1_image_family
- truncated_cover_values
"""

__all__ = ["f_cover_number", "lip1_image_family", "truncated_cover_values"]

import logging
from collections.abc import Sequence

from holdermap.cover_numbers import solve_set_cover
from holdermap.exceptions import InvalidInputError, SearchSpaceTooLargeError
from holdermap.fractal_gen import ifs_sample
from holdermap.metric_core import distance_matrix
from holdermap.schemas.cover import CoverWitness, TruncatedCoverValue
from holdermap.schemas.fractal import IfsSpec
from holdermap.schemas.metric import MetricSample

LOGGER = logging.getLogger(__name__)
MAX_MAPS = 10**6
MAX_FAMILY = 10**4


def _image_maps(source: MetricSample, target: MetricSample, max_maps: int) -> dict:
    """First map, in lexicographic order, realising each Lipschitz-1 image set."""
    if source.size == 0 or target.size == 0:
        raise InvalidInputError("Both spaces need at least one point")
    size = target.size**source.size
    if size > max_maps:
        raise SearchSpaceTooLargeError(size, max_maps)
    spread = distance_matrix(source).tolist()
    moved = distance_matrix(target).tolist()
    found: dict[frozenset[int], tuple[int, ...]] = {}
    assignment: list[int] = []

    def assign(position: int) -> None:
        if position == source.size:
            found.setdefault(frozenset(assignment), tuple(assignment))
            return
        for candidate in range(target.size):
            row = moved[candidate]
            if all(row[assignment[k]] <= spread[position][k] for k in range(position)):
                assignment.append(candidate)
                assign(position + 1)
                assignment.pop()

    assign(0)
    return found


def _maximal(found: dict) -> list[tuple[frozenset[int], tuple[int, ...]]]:
    images = list(found.items())
    return [(x, f) for x, f in images if not any(x < other for other, _ in images)]


def lip1_image_family(
    source: MetricSample, target: MetricSample, max_maps: int = MAX_MAPS
) -> list[tuple[int, ...]]:
    """The maximal image sets of Lipschitz-1 maps from A to B.

    Args:
        source: The space A.
        target: The space B.
        max_maps: Largest |B|^|A| accepted.

    Returns:
        Distinct image sets as sorted B indices; sets inside another one are dropped.

    Raises:
        SearchSpaceTooLargeError: If |B|^|A| exceeds `max_maps`.
    """
    return [tuple(sorted(x)) for x, _ in _maximal(_image_maps(source, target, max_maps))]


def f_cover_number(
    source: MetricSample,
    target: MetricSample,
    max_maps: int = MAX_MAPS,
    max_family: int = MAX_FAMILY,
) -> CoverWitness:
    """F(A, B) by an exact set cover over the maximal Lipschitz-1 images.

    Args:
        source: The space A.
        target: The space B.
        max_maps: Largest |B|^|A| accepted.
        max_family: Largest image family accepted.

    Returns:
        F(A, B) with one witness map per image.

    Raises:
        SearchSpaceTooLargeError: If the enumeration or the family is too large.
    """
    family = _maximal(_image_maps(source, target, max_maps))
    if len(family) > max_family:
        raise SearchSpaceTooLargeError(len(family), max_family)
    masks = [sum(1 << x for x in image) for image, _ in family]
    chosen = solve_set_cover(target.size, masks)
    LOGGER.info(
        "F over %d -> %d points: %d of %d maximal images", source.size, target.size, len(chosen), len(family)
    )
    return CoverWitness(
        k=len(chosen),
        maps=[family[x][1] for x in chosen],
        images=[tuple(sorted(family[x][0])) for x in chosen],
    )


def truncated_cover_values(
    source: IfsSpec, target: IfsSpec, depths: Sequence[int], max_maps: int = MAX_MAPS
) -> list[TruncatedCoverValue]:
    """F between depth-k samples of two attractors, for each requested depth.

    These are raw values of finite truncations; nothing is claimed about their limit.

    Args:
        source: System of the attractor A.
        target: System of the attractor B.
        depths: Sample depths.
        max_maps: Largest |B_k|^|A_k| accepted.

    Returns:
        One value per depth.
    """
    values = []
    for depth in depths:
        witness = f_cover_number(ifs_sample(source, depth), ifs_sample(target, depth), max_maps)
        values.append(TruncatedCoverValue(depth=depth, k=witness.k))
    return values
