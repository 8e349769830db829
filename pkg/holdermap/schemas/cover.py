"""The Cover module.

This module provides the following classes:
- BoxDimEstimate
- CantorImageReport
- CantorVerdict
- CoverReport
- CoverWitness
- TruncatedCoverValue
"""

__all__ = [
    "BoxDimEstimate",
    "CantorImageReport",
    "CantorVerdict",
    "CoverReport",
    "CoverWitness",
    "TruncatedCoverValue",
]

from enum import Enum

from pydantic import Field

from holdermap.schemas import BaseModel


class CoverReport(BaseModel):
    """A cover of a sample by closed balls centered at its own points.

    Attributes:
        r: Ball radius.
        count: Number of balls.
        centers: Indices of the ball centers.
        exact: Whether `count` is certified minimal.
    """

    r: float = Field(gt=0)
    count: int
    centers: tuple[int, ...]
    exact: bool


class BoxDimEstimate(BaseModel):
    """Least-squares slope of log N(X, r) against log(1/r).

    Attributes:
        radii: Radii in decreasing order.
        counts: Greedy cover counts, one per radius.
        slope: Fitted dimension.
        intercept: Fitted intercept.
        residual: Root mean square residual of the fit.
    """

    radii: list[float]
    counts: list[int]
    slope: float
    intercept: float
    residual: float


class CantorVerdict(str, Enum):
    """Enum class for the outcome of the Cantor image test."""

    PASSES = "sufficient-condition-passes"
    """The summands b_n / 2^n shrink geometrically at the end of the sample."""
    FAILS = "necessary-condition-fails"
    """The ratios b_n / 2^n grow steadily."""
    INCONCLUSIVE = "inconclusive"
    """"""


class CantorImageReport(BaseModel):
    """Cover counts b_n = N(X, 3^-n) measured against 2^n.

    Attributes:
        counts: b_1, ..., b_N.
        ratios: b_n / 2^n.
        partial_sums: Running sums of the ratios.
        growth: Quotients of consecutive ratios.
        sup_ratio: Largest ratio.
        exact: Whether the counts are minimal covers.
        verdict: Trend classification of the ratios.
    """

    counts: list[int]
    ratios: list[float]
    partial_sums: list[float]
    growth: list[float]
    sup_ratio: float
    exact: bool
    verdict: CantorVerdict


class CoverWitness(BaseModel):
    """A smallest family of Lipschitz-1 images of A whose union is B.

    Attributes:
        k: F(A, B), the number of images.
        maps: Image tables A -> B, one B index per point of A.
        images: The point sets f_i(A), as sorted B indices.
    """

    k: int
    maps: list[tuple[int, ...]]
    images: list[tuple[int, ...]]


class TruncatedCoverValue(BaseModel):
    """F between depth-truncated samples of two attractors.

    Attributes:
        depth: Sample depth of both attractors.
        k: F of the two samples.
    """

    depth: int
    k: int
