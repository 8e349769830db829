"""The Chain module.

This module provides the following classes:
- DeltaMode
- DeltaResult
- NetTree
- OrderedChain
- ProfileRow
- SolverMethod
"""

__all__ = ["DeltaMode", "DeltaResult", "NetTree", "OrderedChain", "ProfileRow", "SolverMethod"]

import math
from enum import Enum
from typing import Union

from pydantic import Field, model_validator

from holdermap.exceptions import InvalidInputError, InvalidOrderError
from holdermap.schemas import BaseModel
from holdermap.schemas.metric import FiniteMetricSpace, PointCloud

VALUE_RTOL = 1e-12


def check_permutation(order: tuple[int, ...], size: int) -> None:
    """Require `order` to be a bijection on range(size).

    Args:
        order: Candidate ordering of point indices.
        size: Number of points.

    Raises:
        InvalidOrderError: If the order repeats, skips or invents an index.
    """
    if sorted(order) != list(range(size)):
        raise InvalidOrderError(f"Order {list(order)} is not a permutation of 0..{size - 1}")


class SolverMethod(str, Enum):
    """Enum class for the ways an ordering was produced."""

    EXACT = "exact"
    """"""
    SORTED = "sorted"
    """"""
    NEAREST_NEIGHBOR = "nearest_neighbor"
    """"""
    TWO_OPT = "two_opt"
    """"""
    NET_TREE = "net_tree"
    """"""


class DeltaMode(str, Enum):
    """Enum class for the ways delta^s can be computed."""

    EXACT = "exact"
    """"""
    HEURISTIC = "heuristic"
    """Nearest-neighbor walk refined by two_opt."""
    NEAREST_NEIGHBOR = "nn"
    """"""
    TWO_OPT = "2opt"
    """"""
    NET_TREE = "nettree"
    """"""
    SORTED = "sorted"
    """Monotone order of a cloud in R."""


class OrderedChain(BaseModel):
    """A point ordering together with its chain energy.

    Attributes:
        space: The points being ordered.
        order: Permutation of point indices.
        s: Exponent of the energy.
        value: Z^s of the ordering.
    """

    space: Union[FiniteMetricSpace, PointCloud]
    order: tuple[int, ...]
    s: float = Field(gt=0)
    value: float = Field(ge=0)

    @model_validator(mode="after")
    def check_order(self) -> "OrderedChain":
        """Require a permutation of the space's points whose energy is the stored value.

        Returns:
            The validated chain.

        Raises:
            InvalidOrderError: If the order is not a permutation.
            InvalidInputError: If the value differs from the order's Z^s.
        """
        # Deferred: holdermap.chain_energy builds OrderedChain objects.
        from holdermap.chain_energy import z_dp  # noqa: PLC0415

        check_permutation(self.order, self.space.size)
        energy = z_dp(self.space, self.order, self.s)
        if not math.isclose(self.value, energy, rel_tol=VALUE_RTOL, abs_tol=VALUE_RTOL):
            raise InvalidInputError(f"Stored value {self.value!r} differs from Z^s = {energy!r}")
        return self


class DeltaResult(BaseModel):
    """Outcome of minimizing Z^s over orderings.

    Attributes:
        value: Z^s of the reported order.
        order: Best ordering found.
        exact: Whether the value is certified minimal.
        method: How the order was produced.
        nodes_explored: Search nodes visited, 0 for constructive methods.
    """

    value: float
    order: tuple[int, ...]
    exact: bool
    method: SolverMethod
    nodes_explored: int = 0


class NetTree(BaseModel):
    """Hierarchy of greedy covers with parent links.

    Level n is a cover by closed balls of radius `radii[n]` = diam * u^n around the
    centers `levels[n]`, listed in level order. `parents[n]` gives, for each center of
    level n, its parent center at level n - 1 (empty for the root level).

    Attributes:
        u: Ratio between consecutive radii.
        radii: Cover radius of each level.
        levels: Center indices per level, in level order.
        parents: Parent center of every center, per level.
    """

    u: float = Field(gt=0, lt=1)
    radii: list[float]
    levels: list[list[int]]
    parents: list[list[int]]

    @property
    def depth(self) -> int:
        """Index N of the last level."""
        return len(self.levels) - 1

    @property
    def level_sizes(self) -> list[int]:
        """a_n = |H_n| for n = 0..N."""
        return [len(x) for x in self.levels]


class ProfileRow(BaseModel):
    """One exponent of a dimension profile.

    Attributes:
        s: Exponent.
        delta: Best Z^s value found over orderings.
        exact: Whether `delta` is certified minimal.
        bound: The net-tree covering bound at this exponent.
    """

    s: float
    delta: float
    exact: bool
    bound: float
