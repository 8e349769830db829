"""The Cover Numbers module.

Covers use closed balls centered at points of the sample itself.

This module provides the following functions:
- box_dimension_estimate
- cantor_image_test
- covering_number_exact
- covering_number_greedy
- greedy_centers
- in_ball
- solve_set_cover
"""

__all__ = [
    "box_dimension_estimate",
    "cantor_image_test",
    "covering_number_exact",
    "covering_number_greedy",
    "greedy_centers",
    "in_ball",
    "solve_set_cover",
]

import logging
from collections.abc import Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from holdermap.exceptions import (
    DegenerateRadiiError,
    DepthTooLargeError,
    InvalidInputError,
    TooManyPointsError,
    VerificationFailureError,
)
from holdermap.schemas.cover import BoxDimEstimate, CantorImageReport, CantorVerdict, CoverReport
from holdermap.schemas.metric import MetricSample

LOGGER = logging.getLogger(__name__)
BALL_TOLERANCE = 1e-9
COVER_EXACT_MAX_POINTS = 64
CANTOR_MAX_DEPTH = 20
GROWTH_THRESHOLD = 1.1
GROWTH_WINDOW = 3


def in_ball(distances: np.ndarray, radius: float) -> np.ndarray:
    """Membership in a closed ball, boundary ties included up to a relative rounding slack.

    Args:
        distances: Distances from the ball's center.
        radius: Ball radius.

    Returns:
        Boolean mask of the points inside.
    """
    return distances <= radius * (1 + BALL_TOLERANCE)


def greedy_centers(sample: MetricSample, r: float) -> list[int]:
    """Centers picked by repeatedly taking the lowest-index uncovered point.

    Args:
        sample: A space or point cloud.
        r: Ball radius.

    Returns:
        Centers in selection order.
    """
    covered = np.zeros(sample.size, dtype=bool)
    centers = []
    while not covered.all():
        center = int(np.argmin(covered))
        centers.append(center)
        covered |= in_ball(sample.distances_from(center), r)
    return centers


def _check_cover(sample: MetricSample, r: float, centers: Sequence[int]) -> None:
    covered = np.zeros(sample.size, dtype=bool)
    for center in centers:
        covered |= in_ball(sample.distances_from(center), r)
    if not covered.all():
        raise VerificationFailureError(
            f"Point {int(np.argmin(covered))} is outside every ball of radius {r!r}"
        )


def covering_number_greedy(sample: MetricSample, r: float) -> CoverReport:
    """Upper bound on N(X, r) from the greedy cover.

    Args:
        sample: A space or point cloud.
        r: Positive radius.

    Returns:
        The greedy cover, flagged inexact.

    Raises:
        InvalidInputError: If r is not positive.
    """
    if not r > 0:
        raise InvalidInputError(f"Radius must be positive, got {r!r}")
    centers = greedy_centers(sample, r)
    _check_cover(sample, r, centers)
    return CoverReport(r=r, count=len(centers), centers=tuple(centers), exact=False)


def _undominated(masks: Sequence[int]) -> list[int]:
    ranked = sorted(range(len(masks)), key=lambda x: (-masks[x].bit_count(), x))
    kept = []
    for index in ranked:
        if masks[index] and not any(masks[index] | masks[x] == masks[x] for x in kept):
            kept.append(index)
    return kept


def _greedy_choice(universe: int, masks: Sequence[int], candidates: Sequence[int]) -> list[int]:
    covered = 0
    chosen = []
    while covered != universe:
        best = max(candidates, key=lambda x: ((masks[x] & ~covered).bit_count(), -x))
        chosen.append(best)
        covered |= masks[best]
    return chosen


def _lower_bound(universe_size: int, masks: Sequence[int], candidates: Sequence[int]) -> int:
    widest = max(masks[x].bit_count() for x in candidates)
    return -(-universe_size // widest)


def _incidence(universe_size: int, masks: Sequence[int], candidates: Sequence[int]) -> np.ndarray:
    return np.array(
        [[(masks[x] >> element) & 1 for x in candidates] for element in range(universe_size)],
        dtype=float,
    )


def solve_set_cover(universe_size: int, masks: Sequence[int]) -> list[int]:
    """Smallest family of sets whose union is the whole universe.

    Sets are bitmasks over range(universe_size). Sets contained in another are dropped
    first; the rest go to a 0-1 integer program with one variable per set and one
    covering row per element. The optimum is checked against the greedy cover from
    above and ceil(universe_size / widest set) from below.

    Args:
        universe_size: Number of elements.
        masks: The candidate sets.

    Returns:
        Sorted indices into `masks` of a minimum cover.

    Raises:
        InvalidInputError: If the sets do not cover the universe.
        VerificationFailureError: If the solver fails or its cover breaks a bound.
    """
    universe = (1 << universe_size) - 1
    union = 0
    for mask in masks:
        union |= mask
    if union & universe != universe:
        raise InvalidInputError("The candidate sets do not cover every element")
    if not universe:
        return []
    candidates = _undominated(masks)
    result = milp(
        c=np.ones(len(candidates)),
        constraints=LinearConstraint(_incidence(universe_size, masks, candidates), lb=1),
        bounds=Bounds(0, 1),
        integrality=np.ones(len(candidates)),
    )
    if not result.success:
        raise VerificationFailureError(f"Set cover solver stopped: {result.message}")
    chosen = sorted(candidates[x] for x in np.flatnonzero(result.x > 0.5))
    covered = 0
    for index in chosen:
        covered |= masks[index]
    upper = len(_greedy_choice(universe, masks, candidates))
    lower = _lower_bound(universe_size, masks, candidates)
    if covered & universe != universe or not lower <= len(chosen) <= upper:
        raise VerificationFailureError(
            f"Set cover of size {len(chosen)} is not a cover within bounds [{lower}, {upper}]"
        )
    LOGGER.debug(
        "Set cover over %d elements and %d sets: %d chosen, greedy %d, lower bound %d",
        universe_size,
        len(masks),
        len(chosen),
        upper,
        lower,
    )
    return chosen


def covering_number_exact(
    sample: MetricSample, r: float, size_cap: int = COVER_EXACT_MAX_POINTS
) -> CoverReport:
    """N(X, r) by an exact set cover over the n candidate balls.

    Args:
        sample: A space or point cloud.
        r: Positive radius.
        size_cap: Largest sample accepted.

    Returns:
        A minimum cover, flagged exact.

    Raises:
        InvalidInputError: If r is not positive.
        TooManyPointsError: If the sample is larger than `size_cap`.
    """
    if not r > 0:
        raise InvalidInputError(f"Radius must be positive, got {r!r}")
    if sample.size > size_cap:
        raise TooManyPointsError(sample.size, size_cap)
    masks = [
        sum(1 << int(x) for x in np.flatnonzero(in_ball(sample.distances_from(i), r)))
        for i in range(sample.size)
    ]
    centers = solve_set_cover(sample.size, masks)
    _check_cover(sample, r, centers)
    return CoverReport(r=r, count=len(centers), centers=tuple(centers), exact=True)


def box_dimension_estimate(sample: MetricSample, radii: Sequence[float]) -> BoxDimEstimate:
    """Ordinary least squares slope of log N(X, r) against log(1/r) over greedy counts.

    Args:
        sample: A space or point cloud.
        radii: At least three distinct positive radii.

    Returns:
        The fit, with radii sorted in decreasing order.

    Raises:
        DegenerateRadiiError: If the radii cannot support a regression.
    """
    schedule = sorted({float(x) for x in radii}, reverse=True)
    if len(schedule) < 3 or len(schedule) != len(radii) or schedule[-1] <= 0:
        raise DegenerateRadiiError(f"Need three or more distinct positive radii, got {list(radii)}")
    counts = [covering_number_greedy(sample, r).count for r in schedule]
    x = np.log(1 / np.array(schedule))
    y = np.log(np.array(counts, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    LOGGER.info("Box dimension slope %.6f over %d radii", slope, len(schedule))
    return BoxDimEstimate(
        radii=schedule,
        counts=counts,
        slope=float(slope),
        intercept=float(intercept),
        residual=residual,
    )


def _verdict(growth: Sequence[float]) -> CantorVerdict:
    windows = [growth[i : i + GROWTH_WINDOW] for i in range(len(growth) - GROWTH_WINDOW + 1)]
    if any(all(x > GROWTH_THRESHOLD for x in window) for window in windows):
        return CantorVerdict.FAILS
    if windows and all(x < 1 / GROWTH_THRESHOLD for x in windows[-1]):
        return CantorVerdict.PASSES
    return CantorVerdict.INCONCLUSIVE


def cantor_image_test(
    sample: MetricSample,
    depth_max: int,
    exact_cap: int = COVER_EXACT_MAX_POINTS,
    max_depth: int = CANTOR_MAX_DEPTH,
) -> CantorImageReport:
    """Compare b_n = N(X, 3^-n) with 2^n for n = 1..depth_max.

    A summable sequence b_n / 2^n is sufficient for X to be a Lipschitz image of the
    middle-third Cantor set, and bounded ratios are necessary. On a finite sample both
    are trends: the verdict fails when some three consecutive growth factors of the
    ratio exceed 1.1, passes when the last three are below 1 / 1.1, and is
    inconclusive otherwise.

    Args:
        sample: A space or point cloud.
        depth_max: Largest n.
        exact_cap: Largest sample covered exactly; bigger ones use greedy counts.
        max_depth: Largest depth_max accepted.

    Returns:
        The counts, ratios, partial sums and verdict.

    Raises:
        InvalidInputError: If depth_max is below 1.
        DepthTooLargeError: If depth_max exceeds `max_depth`.
    """
    if depth_max < 1:
        raise InvalidInputError(f"depth_max must be at least 1, got {depth_max}")
    if depth_max > max_depth:
        raise DepthTooLargeError(f"Depth {depth_max} exceeds the limit of {max_depth}")
    exact = sample.size <= exact_cap
    measure = covering_number_exact if exact else covering_number_greedy
    counts = [measure(sample, 3.0**-n).count for n in range(1, depth_max + 1)]
    ratios = [count / 2**n for n, count in enumerate(counts, start=1)]
    growth = [b / a for a, b in zip(ratios, ratios[1:])]
    verdict = _verdict(growth)
    LOGGER.info("Cantor image test over %d depths: %s", depth_max, verdict.value)
    return CantorImageReport(
        counts=counts,
        ratios=ratios,
        partial_sums=np.cumsum(ratios).tolist(),
        growth=growth,
        sup_ratio=max(ratios),
        exact=exact,
        verdict=verdict,
    )
