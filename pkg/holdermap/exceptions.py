"""The Exceptions module.

This module provides the following classes:
- AsymmetricMatrixError
- BudgetExceededError
- DegenerateRadiiError
- DepthTooLargeError
- DivergentSumError
- DuplicatePointError
- EmptyOrderError
- EmptySubsetError
- GapTooSmallError
- HoldermapError
- InfiniteConstantError
- InvalidInputError
- InvalidOrderError
- InvalidRatioError
- LimitExceededError
- MalformedFileError
- NegativeDistanceError
- NonDecreasingDiametersError
- NonPositiveScaleError
- NotLipschitzOnSubsetError
- NotUltrametricError
- SearchSpaceTooLargeError
- SscViolationError
- TooManyPointsError
- TriangleViolationError
- VerificationFailureError
"""

__all__ = [
    "AsymmetricMatrixError",
    "BudgetExceededError",
    "DegenerateRadiiError",
    "DepthTooLargeError",
    "DivergentSumError",
    "DuplicatePointError",
    "EmptyOrderError",
    "EmptySubsetError",
    "GapTooSmallError",
    "HoldermapError",
    "InfiniteConstantError",
    "InvalidInputError",
    "InvalidOrderError",
    "InvalidRatioError",
    "LimitExceededError",
    "MalformedFileError",
    "NegativeDistanceError",
    "NonDecreasingDiametersError",
    "NonPositiveScaleError",
    "NotLipschitzOnSubsetError",
    "NotUltrametricError",
    "SearchSpaceTooLargeError",
    "SscViolationError",
    "TooManyPointsError",
    "TriangleViolationError",
    "VerificationFailureError",
]

from pathlib import Path
from typing import Any, Optional


class HoldermapError(Exception):
    """Class for any holdermap errors."""


class InvalidInputError(HoldermapError):
    """Class for inputs that break an operation's preconditions."""


class LimitExceededError(HoldermapError):
    """Class for instances beyond a size cap or search budget."""


class VerificationFailureError(HoldermapError):
    """Class for a constructed object failing its own post-check."""


class AsymmetricMatrixError(InvalidInputError):
    """Class for a distance matrix with d(i, j) != d(j, i).

    Args:
        i: Row index of the witness entry.
        j: Column index of the witness entry.
    """

    def __init__(self, i: int, j: int):
        self.i = i
        self.j = j
        super().__init__(f"Distance matrix is not symmetric at ({i}, {j})")


class NegativeDistanceError(InvalidInputError):
    """Class for a negative or non-finite distance entry.

    Args:
        i: Row index of the witness entry.
        j: Column index of the witness entry.
    """

    def __init__(self, i: int, j: int):
        self.i = i
        self.j = j
        super().__init__(f"Distance at ({i}, {j}) is negative or not finite")


class TriangleViolationError(InvalidInputError):
    """Class for d(i, j) > d(i, k) + d(k, j).

    Args:
        i: First endpoint.
        j: Second endpoint.
        k: The intermediate point.
    """

    def __init__(self, i: int, j: int, k: int):
        self.i = i
        self.j = j
        self.k = k
        super().__init__(f"Triangle inequality fails: d({i},{j}) > d({i},{k}) + d({k},{j})")


class DuplicatePointError(InvalidInputError):
    """Class for two distinct indices describing the same point.

    Args:
        i: First index.
        j: Second index.
    """

    def __init__(self, i: int, j: int):
        self.i = i
        self.j = j
        super().__init__(f"Points {i} and {j} coincide")


class NonPositiveScaleError(InvalidInputError):
    """Class for a scale factor that is not strictly positive."""


class GapTooSmallError(InvalidInputError):
    """Class for a gapped union whose gap is below a part's diameter.

    Args:
        gap: The requested gap.
        required: The smallest admissible gap.
    """

    def __init__(self, gap: float, required: float):
        self.gap = gap
        self.required = required
        super().__init__(f"Gap {gap!r} is smaller than the largest part diameter {required!r}")


class MalformedFileError(InvalidInputError):
    """Class for an unreadable space or cloud file.

    Args:
        path: The file being read.
        message: What is wrong.
        line: 1-based line of the problem, if known.
        field: Offending column or key, if known.
    """

    def __init__(
        self,
        path: Optional[Path],
        message: str,
        line: Optional[int] = None,
        field: Optional[str] = None,
    ):
        self.path = path
        self.line = line
        self.field = field
        location = str(path) if path else "<input>"
        if line is not None:
            location += f", line {line}"
        if field is not None:
            location += f", field {field}"
        super().__init__(f"{location}: {message}")


class DepthTooLargeError(InvalidInputError):
    """Class for a construction depth above the generator's limit."""


class SscViolationError(InvalidInputError):
    """Class for an IFS whose first-level box images intersect.

    Args:
        i: First map index.
        j: Second map index.
    """

    def __init__(self, i: int, j: int):
        self.i = i
        self.j = j
        super().__init__(f"Images of maps {i} and {j} overlap; strong separation fails")


class NonDecreasingDiametersError(InvalidInputError):
    """Class for tree level diameters that are not strictly decreasing and positive."""


class EmptyOrderError(InvalidInputError):
    """Class for an empty point ordering."""


class InvalidOrderError(InvalidInputError):
    """Class for an ordering that is not a permutation of the point indices."""


class DegenerateRadiiError(InvalidInputError):
    """Class for a radius schedule that cannot support a regression."""


class DivergentSumError(InvalidInputError):
    """Class for a geometric tail whose ratio is at least 1."""


class InfiniteConstantError(InvalidInputError):
    """Class for a map sending equal anchors to different points.

    Args:
        witness: The offending pair of indices.
    """

    def __init__(self, witness: tuple[int, int]):
        self.witness = witness
        super().__init__(
            f"Anchors {witness[0]} and {witness[1]} coincide but their images differ"
        )


class NotUltrametricError(InvalidInputError):
    """Class for a space failing the strong triangle inequality.

    Args:
        witness: Indices (x, y, z) with d(x, y) > max(d(x, z), d(y, z)).
    """

    def __init__(self, witness: tuple[int, int, int]):
        self.witness = witness
        x, y, z = witness
        super().__init__(f"Space is not ultrametric: d({x},{y}) > max(d({x},{z}), d({y},{z}))")


class EmptySubsetError(InvalidInputError):
    """Class for an empty target subset."""


class NotLipschitzOnSubsetError(InvalidInputError):
    """Class for a map that already breaks the Lipschitz bound on its domain.

    Args:
        witness: The worst pair of domain indices.
        ratio: Its distance ratio.
        bound: The requested constant.
    """

    def __init__(self, witness: tuple[int, int], ratio: float, bound: float):
        self.witness = witness
        self.ratio = ratio
        self.bound = bound
        super().__init__(f"Pair {witness} has ratio {ratio!r} above the constant {bound!r}")


class InvalidRatioError(InvalidInputError):
    """Class for a similarity ratio outside (0, 1)."""


class TooManyPointsError(LimitExceededError):
    """Class for inputs above an operation's point cap.

    Args:
        count: The number of points requested.
        cap: The operation's limit.
    """

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} points exceeds the limit of {cap}")


class SearchSpaceTooLargeError(LimitExceededError):
    """Class for enumerations above their size cap.

    Args:
        size: Size of the search space.
        cap: The operation's limit.
    """

    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"Search space of {size} exceeds the limit of {cap}")


class BudgetExceededError(LimitExceededError):
    """Class for a branch-and-bound that ran out of nodes.

    Args:
        best: Best result found before the budget ran out.
    """

    def __init__(self, best: Any):
        self.best = best
        super().__init__(
            f"Node budget exhausted after {best.nodes_explored} nodes; best value {best.value!r}"
        )
