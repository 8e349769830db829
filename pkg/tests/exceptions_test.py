"""The Exceptions test module.

This module contains tests for Exceptions.
"""

from pathlib import Path
from types import SimpleNamespace

import pytest

from holdermap import exceptions
from holdermap.exceptions import (
    BudgetExceededError,
    HoldermapError,
    InvalidInputError,
    LimitExceededError,
    MalformedFileError,
    NotUltrametricError,
    TooManyPointsError,
    VerificationFailureError,
)


@pytest.mark.parametrize("name", exceptions.__all__)
def test_hierarchy(name: str) -> None:
    """Test every error is a HoldermapError and falls in exactly one category."""
    error = getattr(exceptions, name)
    assert issubclass(error, HoldermapError)
    if error is not HoldermapError:
        categories = [InvalidInputError, LimitExceededError, VerificationFailureError]
        assert sum(issubclass(error, x) for x in categories) == 1


def test_malformed_file_location() -> None:
    """Test a MalformedFileError names the file, line and field."""
    err = MalformedFileError(Path("space.csv"), "not a number", line=4, field="2")
    assert str(err) == "space.csv, line 4, field 2: not a number"
    assert str(MalformedFileError(None, "empty")) == "<input>: empty"


def test_too_many_points() -> None:
    """Test a TooManyPointsError keeps the count and the cap."""
    err = TooManyPointsError(30, 12)
    assert (err.count, err.cap) == (30, 12)
    assert "30" in str(err)
    assert isinstance(err, LimitExceededError)


def test_budget_exceeded() -> None:
    """Test a BudgetExceededError carries the best result found."""
    best = SimpleNamespace(nodes_explored=100, value=2.5)
    err = BudgetExceededError(best)
    assert err.best is best
    assert "100 nodes" in str(err)


def test_not_ultrametric() -> None:
    """Test a NotUltrametricError describes its witness triple."""
    err = NotUltrametricError((0, 2, 1))
    assert err.witness == (0, 2, 1)
    assert "d(0,2) > max(d(0,1), d(2,1))" in str(err)
