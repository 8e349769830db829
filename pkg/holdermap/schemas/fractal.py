"""The Fractal module.

This module provides the following classes:
- CarpetSpec
- IfsSpec
- SimilarityMap
"""

__all__ = ["CarpetSpec", "IfsSpec", "SimilarityMap"]

from pydantic import Field, field_validator, model_validator

from holdermap.exceptions import InvalidInputError, InvalidRatioError
from holdermap.schemas import BaseModel


class SimilarityMap(BaseModel):
    """A contracting similarity x -> ratio * x + translation.

    Attributes:
        ratio: Contraction ratio in (0, 1).
        translation: Translation vector.
    """

    ratio: float
    translation: tuple[float, ...]

    @field_validator("ratio")
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


class IfsSpec(BaseModel):
    """An iterated function system of similarities without rotation.

    Separation is checked by the generators, not at construction.

    Attributes:
        maps: The similarity maps f_1, ..., f_m.
    """

    maps: list[SimilarityMap] = Field(min_length=1)

    @model_validator(mode="after")
    def check_arity(self) -> "IfsSpec":
        """Require every translation to live in the same R^d.

        Returns:
            The validated spec.

        Raises:
            InvalidInputError: If translations disagree in arity.
        """
        if len({len(x.translation) for x in self.maps}) != 1 or not self.maps[0].translation:
            raise InvalidInputError("All translations must share one arity d >= 1")
        return self

    @property
    def arity(self) -> int:
        """Dimension d of the ambient space."""
        return len(self.maps[0].translation)

    @property
    def ratios(self) -> list[float]:
        """Contraction ratios in map order."""
        return [x.ratio for x in self.maps]


class CarpetSpec(BaseModel):
    """A Bedford-McMullen carpet pattern.

    The unit square is cut into `n` columns and `m` rows; `pattern` lists the kept
    (column, row) cells.

    Attributes:
        m: Number of rows.
        n: Number of columns.
        pattern: Kept cells as (column, row) pairs.
    """

    m: int = Field(ge=2)
    n: int = Field(ge=2)
    pattern: list[tuple[int, int]] = Field(min_length=1)

    @model_validator(mode="after")
    def check_pattern(self) -> "CarpetSpec":
        """Require m <= n and every cell inside the grid, without repeats.

        Returns:
            The validated spec.

        Raises:
            InvalidInputError: If a constraint fails.
        """
        if self.m > self.n:
            raise InvalidInputError(f"Carpet needs m <= n, got m={self.m}, n={self.n}")
        if len(set(self.pattern)) != len(self.pattern):
            raise InvalidInputError("Carpet pattern repeats a cell")
        for column, row in self.pattern:
            if not (0 <= column < self.n and 0 <= row < self.m):
                raise InvalidInputError(f"Cell ({column}, {row}) lies outside the grid")
        return self

    @property
    def rows(self) -> set[int]:
        """The projection of the pattern to its row coordinate."""
        return {row for _, row in self.pattern}
