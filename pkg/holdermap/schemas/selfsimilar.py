"""The Selfsimilar module.

This module provides the following classes:
- CompatibilityReport
- HomogeneousSpec
- PowerSumCheck
- Verdict
"""

__all__ = ["CompatibilityReport", "HomogeneousSpec", "PowerSumCheck", "Verdict"]

from enum import Enum

from pydantic import Field, field_validator

from holdermap.exceptions import InvalidRatioError
from holdermap.schemas import BaseModel


class HomogeneousSpec(BaseModel):
    """A self-similar set made of q copies of itself scaled by r.

    Attributes:
        q: Number of pieces.
        r: Common similarity ratio.
    """

    q: int = Field(ge=2)
    r: float

    @field_validator("r")
    def check_ratio(cls, value: float) -> float:
        """Reject ratios outside (0, 1).

        Args:
            value: The ratio.

        Returns:
            The ratio.

        Raises:
            InvalidRatioError: If the ratio is not in (0, 1).
        """
        if not 0 < value < 1:
            raise InvalidRatioError(f"Similarity ratio {value!r} is not in (0, 1)")
        return value


class Verdict(str, Enum):
    """Enum class for whether a homogeneous set maps Lipschitz onto another self-similar set."""

    DIMENSION_MISMATCH = "DimensionMismatch"
    """"""
    COMPATIBLE = "Compatible"
    """"""
    INCOMPATIBLE = "Incompatible"
    """"""


class CompatibilityReport(BaseModel):
    """Arithmetic evidence behind a compatibility verdict.

    Attributes:
        s_a: Dimension log q / log(1/r) of A.
        s_b: Similarity dimension of B.
        k: Largest k with q a perfect k-th power.
        alphas: k log(beta_j) / log(r) for every ratio beta_j of B.
        verdict: The decision.
        tolerance: Slack used for dimension equality and integrality.
        exact: Whether the ratios were given as exact powers of r.
    """

    s_a: float
    s_b: float
    k: int
    alphas: list[float]
    verdict: Verdict
    tolerance: float
    exact: bool = False


class PowerSumCheck(BaseModel):
    """High-precision evaluation of sum_i q^(r_i).

    Attributes:
        total: The sum, rounded to a float.
        sums_to_one: Whether the sum is 1 within 1e-20.
        all_integer: Whether every exponent is an integer.
    """

    total: float
    sums_to_one: bool
    all_integer: bool
