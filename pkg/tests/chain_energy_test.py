"""The Chain Energy test module.

This module contains tests for Z^s and OrderedChain objects.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holdermap import chain_energy, fractal_gen, metric_core
from holdermap.exceptions import (
    EmptyOrderError,
    InvalidInputError,
    InvalidOrderError,
    TooManyPointsError,
)
from holdermap.schemas.chain import OrderedChain
from holdermap.schemas.metric import FiniteMetricSpace, PointCloud
from tests.strategies import unit_metrics

CANTOR_DIM = math.log(2) / math.log(3)


def test_z_dp_single_point() -> None:
    """Test the z_dp function on one point."""
    space = metric_core.validate([[0]])
    assert chain_energy.z_dp(space, [0], 0.5) == 0.0


def test_z_dp_two_points() -> None:
    """Test the z_dp function on two points is d^s."""
    space = metric_core.validate([[0, 3], [3, 0]])
    assert chain_energy.z_dp(space, [1, 0], 0.5) == pytest.approx(math.sqrt(3))


def test_z_dp_cantor_step() -> None:
    """Test the z_dp function on the first Cantor step at the Cantor dimension."""
    cloud = fractal_gen.cantor_endpoints(1)
    assert chain_energy.z_dp(cloud, [0, 1, 2, 3], CANTOR_DIM) == pytest.approx(1.5)


@pytest.mark.parametrize(("s", "expected"), [(1, 1.0), (2, 1.0), (0.5, 2 * math.sqrt(0.5))])
def test_z_bruteforce_collinear(s: float, expected: float) -> None:
    """Test the z_bruteforce function on 0, 1/2 and 1."""
    cloud = PointCloud(points=[0, 0.5, 1])
    assert chain_energy.z_bruteforce(cloud, [0, 1, 2], s) == pytest.approx(expected)
    assert chain_energy.z_dp(cloud, [0, 1, 2], s) == pytest.approx(expected)


def test_z_bruteforce_too_many() -> None:
    """Test the z_bruteforce function above its point cap."""
    grid = fractal_gen.uniform_grid(21)
    with pytest.raises(TooManyPointsError):
        chain_energy.z_bruteforce(grid, list(range(21)), 1.0)


def test_prefix_energies(line_space: FiniteMetricSpace) -> None:
    """Test the prefix_energies function returns every prefix value."""
    np.testing.assert_allclose(chain_energy.prefix_energies(line_space, [0, 2, 1], 1.0), [0, 2, 3])


@pytest.mark.parametrize("order", [[], [0, 0], [0, 3], [-1, 0]])
def test_z_dp_invalid_order(line_space: FiniteMetricSpace, order: list[int]) -> None:
    """Test the z_dp function with an empty, repeated or out-of-range order."""
    with pytest.raises((EmptyOrderError, InvalidOrderError)):
        chain_energy.z_dp(line_space, order, 1.0)


@pytest.mark.parametrize("s", [0, -1])
def test_z_dp_invalid_exponent(line_space: FiniteMetricSpace, s: float) -> None:
    """Test the z_dp function with an exponent that is not positive."""
    with pytest.raises(InvalidInputError):
        chain_energy.z_dp(line_space, [0, 1, 2], s)


def test_ordered_chain(line_space: FiniteMetricSpace) -> None:
    """Test the ordered_chain function caches the energy of a permutation."""
    chain = chain_energy.ordered_chain(line_space, [2, 0, 1], 1.0)
    assert chain.order == (2, 0, 1)
    assert chain.value == 3.0


def test_ordered_chain_partial(line_space: FiniteMetricSpace) -> None:
    """Test the ordered_chain function rejects an order that skips a point."""
    with pytest.raises(InvalidOrderError):
        chain_energy.ordered_chain(line_space, [0, 2], 1.0)


def test_ordered_chain_value_mismatch(line_space: FiniteMetricSpace) -> None:
    """Test an OrderedChain must store the energy of its order."""
    chain = OrderedChain(space=line_space, order=(0, 2, 1), s=1.0, value=3.0)
    assert chain.value == chain_energy.z_dp(line_space, chain.order, 1.0)
    with pytest.raises(InvalidInputError):
        OrderedChain(space=line_space, order=(0, 2, 1), s=1.0, value=2.0)


@settings(max_examples=500, deadline=None)
@given(unit_metrics(max_size=10), st.sampled_from([0.5, CANTOR_DIM, 1.0, 2.0]), st.data())
def test_z_bruteforce_matches_z_dp(space: FiniteMetricSpace, s: float, data: st.DataObject) -> None:
    """Test the enumeration and the recurrence agree on random spaces."""
    order = data.draw(st.permutations(range(space.size)))
    assert chain_energy.z_bruteforce(space, order, s) == pytest.approx(
        chain_energy.z_dp(space, order, s), rel=1e-12
    )


@given(unit_metrics(min_size=3), st.floats(min_value=0.2, max_value=3.0), st.data())
def test_superadditive(space: FiniteMetricSpace, s: float, data: st.DataObject) -> None:
    """Test Z(x_1..x_i) + Z(x_i..x_j) <= Z(x_1..x_j) and the single-step lower bound."""
    order = data.draw(st.permutations(range(space.size)))
    split = data.draw(st.integers(min_value=0, max_value=space.size - 1))
    head = chain_energy.z_dp(space, order[: split + 1], s)
    tail = chain_energy.z_dp(space, order[split:], s)
    whole = chain_energy.z_dp(space, order, s)
    assert head + tail <= whole * (1 + 1e-12)
    assert tail >= space.distance(order[split], order[-1]) ** s * (1 - 1e-12)


@given(unit_metrics(), st.floats(min_value=0.2, max_value=3.0), st.data())
def test_reversal(space: FiniteMetricSpace, s: float, data: st.DataObject) -> None:
    """Test an order and its reversal have the same energy."""
    order = data.draw(st.permutations(range(space.size)))
    assert chain_energy.z_dp(space, order[::-1], s) == pytest.approx(
        chain_energy.z_dp(space, order, s), rel=1e-12
    )


@given(unit_metrics(), st.floats(min_value=0.2, max_value=1.5), st.floats(min_value=0.01, max_value=1.5))
def test_monotone_in_s(space: FiniteMetricSpace, s: float, step: float) -> None:
    """Test Z^s grows with s when distances are at least 1 and shrinks when at most 1."""
    order = list(range(space.size))
    assert chain_energy.z_dp(space, order, s) <= chain_energy.z_dp(space, order, s + step) * (1 + 1e-12)
    small = metric_core.scale(space, 0.5)
    assert chain_energy.z_dp(small, order, s) >= chain_energy.z_dp(small, order, s + step) * (1 - 1e-12)


@settings(deadline=None)
@given(unit_metrics(min_size=3), st.floats(min_value=0.2, max_value=3.0), st.data())
def test_restriction(space: FiniteMetricSpace, s: float, data: st.DataObject) -> None:
    """Test a subsequence of an order never has a larger energy."""
    order = data.draw(st.permutations(range(space.size)))
    keep = data.draw(st.lists(st.booleans(), min_size=space.size, max_size=space.size))
    subsequence = [x for x, flag in zip(order, keep) if flag]
    if subsequence:
        assert chain_energy.z_dp(space, subsequence, s) <= chain_energy.z_dp(space, order, s) * (1 + 1e-12)
