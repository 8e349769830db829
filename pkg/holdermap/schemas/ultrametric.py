"""The Ultrametric module.

This module provides the following classes:
- LipschitzCheck
- MapTable
- UltrametricCheck
"""

__all__ = ["LipschitzCheck", "MapTable", "UltrametricCheck"]

from typing import Optional, Union

from pydantic import model_validator

from holdermap.exceptions import InvalidInputError
from holdermap.schemas import BaseModel
from holdermap.schemas.metric import FiniteMetricSpace, PointCloud


class MapTable(BaseModel):
    """A total map between two finite spaces, stored as one image index per point.

    Attributes:
        domain: The space mapped from.
        codomain: The space mapped into.
        image: Codomain index of every domain point.
    """

    domain: Union[FiniteMetricSpace, PointCloud]
    codomain: Union[FiniteMetricSpace, PointCloud]
    image: tuple[int, ...]

    @model_validator(mode="after")
    def check_total(self) -> "MapTable":
        """Require one valid codomain index per domain point.

        Returns:
            The validated table.

        Raises:
            InvalidInputError: If the table is partial or points outside the codomain.
        """
        if len(self.image) != self.domain.size:
            raise InvalidInputError(
                f"Map table has {len(self.image)} entries for {self.domain.size} points"
            )
        if any(not 0 <= x < self.codomain.size for x in self.image):
            raise InvalidInputError("Map table points outside its codomain")
        return self


class LipschitzCheck(BaseModel):
    """Outcome of comparing a map's worst distance ratio with a constant.

    Attributes:
        holds: Whether the worst ratio is at most `bound`.
        worst_ratio: Largest d(f(x), f(y)) / d(x, y).
        witness: The pair attaining it, absent for fewer than two points.
        bound: The constant tested.
    """

    holds: bool
    worst_ratio: float
    witness: Optional[tuple[int, int]] = None
    bound: float


class UltrametricCheck(BaseModel):
    """Outcome of the strong triangle inequality check.

    Attributes:
        is_ultrametric: Whether every triple passes.
        witness: A triple (x, y, z) with d(x, y) > max(d(x, z), d(y, z)).
    """

    is_ultrametric: bool
    witness: Optional[tuple[int, int, int]] = None
