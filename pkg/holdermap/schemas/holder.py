"""The Holder module.

This module provides the following classes:
- HolderCertificate
- HolderParametrization
"""

__all__ = ["HolderCertificate", "HolderParametrization"]

from typing import Optional

from pydantic import Field, model_validator

from holdermap.exceptions import InvalidInputError
from holdermap.schemas import BaseModel


class HolderParametrization(BaseModel):
    """Reals a_1 <= ... <= a_n in [0, ell] mapped onto points of a space.

    Attributes:
        anchors: The reals a_i, starting at 0 and ending at `ell`.
        images: Point index assigned to each anchor.
        alpha: Hölder exponent, 1 / s.
        constant: Certified Hölder constant C.
        ell: Length of the parameter interval.
    """

    anchors: list[float]
    images: list[int]
    alpha: float = Field(gt=0)
    constant: float = Field(ge=0, alias="C")
    ell: float = Field(ge=0)

    @model_validator(mode="after")
    def check_anchors(self) -> "HolderParametrization":
        """Require nondecreasing anchors spanning [0, ell], one per image.

        Returns:
            The validated parametrization.

        Raises:
            InvalidInputError: If a constraint fails.
        """
        if not self.anchors or len(self.anchors) != len(self.images):
            raise InvalidInputError("Need one anchor per image, at least one")
        if self.anchors[0] != 0 or self.anchors[-1] != self.ell:
            raise InvalidInputError(f"Anchors must run from 0 to ell={self.ell!r}")
        if any(a > b for a, b in zip(self.anchors, self.anchors[1:])):
            raise InvalidInputError("Anchors must be nondecreasing")
        return self


class HolderCertificate(BaseModel):
    """Worst ratio d(f(i), f(j)) / |a_i - a_j|^alpha of a map.

    Attributes:
        worst_constant: The smallest valid Hölder constant.
        witness: The pair attaining it, absent for fewer than two points.
    """

    worst_constant: float
    witness: Optional[tuple[int, int]] = None
