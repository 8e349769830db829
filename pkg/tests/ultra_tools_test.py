"""The Ultra Tools test module.

This module contains tests for balls, retractions and Lipschitz extensions in ultrametric spaces.
"""

import pytest
from hypothesis import given, settings, strategies as st

from holdermap import fractal_gen, metric_core, ultra_tools
from holdermap.exceptions import (
    EmptySubsetError,
    InvalidInputError,
    NotLipschitzOnSubsetError,
    NotUltrametricError,
)
from holdermap.schemas.metric import FiniteMetricSpace, PointCloud
from holdermap.schemas.ultrametric import MapTable


def test_is_ultrametric(tree_space: FiniteMetricSpace) -> None:
    """Test the is_ultrametric function on a tree space."""
    check = ultra_tools.is_ultrametric(tree_space)
    assert check.is_ultrametric
    assert check.witness is None


def test_is_ultrametric_line() -> None:
    """Test the is_ultrametric function names a failing triple on a line."""
    check = ultra_tools.is_ultrametric(PointCloud(points=[0, 0.5, 1]))
    assert not check.is_ultrametric
    assert check.witness == (0, 2, 1)


def test_closed_ball(tree_space: FiniteMetricSpace) -> None:
    """Test the closed_ball function includes its boundary."""
    assert ultra_tools.closed_ball(tree_space, 0, 0.25) == {0, 1}
    assert ultra_tools.closed_ball(tree_space, 0, 0.1) == {0}
    assert ultra_tools.closed_ball(tree_space, 3, 1.0) == {0, 1, 2, 3}


def test_sphere(tree_space: FiniteMetricSpace) -> None:
    """Test the sphere function."""
    assert ultra_tools.sphere(tree_space, 0, 1.0) == {2, 3}
    assert ultra_tools.sphere(tree_space, 0, 0.5) == frozenset()


def test_retraction(tree_space: FiniteMetricSpace) -> None:
    """Test the retraction function sends each point into the nearest branch."""
    result = ultra_tools.retraction(tree_space, [1, 2])
    assert result.image == (1, 1, 2, 2)
    assert ultra_tools.retraction(tree_space, [3]).image == (3, 3, 3, 3)


def test_retraction_shared_sphere(tree_space: FiniteMetricSpace) -> None:
    """Test points on the same sphere go to its lowest subset point."""
    assert ultra_tools.retraction(tree_space, [2, 3]).image == (2, 2, 2, 3)


def test_retraction_invalid(tree_space: FiniteMetricSpace, line_space: FiniteMetricSpace) -> None:
    """Test the retraction function with an empty or out-of-range subset, or a line."""
    with pytest.raises(EmptySubsetError):
        ultra_tools.retraction(tree_space, [])
    with pytest.raises(InvalidInputError):
        ultra_tools.retraction(tree_space, [4])
    with pytest.raises(NotUltrametricError) as err:
        ultra_tools.retraction(line_space, [0])
    assert err.value.witness == (0, 2, 1)


def test_verify_lipschitz(tree_space: FiniteMetricSpace) -> None:
    """Test the verify_lipschitz function reports the worst ratio."""
    table = MapTable(domain=tree_space, codomain=tree_space, image=(0, 2, 1, 3))
    check = ultra_tools.verify_lipschitz(table, 1.0)
    assert not check.holds
    assert check.worst_ratio == 4.0
    assert check.witness == (0, 1)
    assert ultra_tools.verify_lipschitz(table, 4.0).holds


def test_extend_lipschitz(tree_space: FiniteMetricSpace) -> None:
    """Test the extend_lipschitz function agrees with the map on its subset."""
    part = metric_core.subspace(tree_space, [0, 2])
    f = MapTable(domain=part, codomain=tree_space, image=(1, 3))
    result = ultra_tools.extend_lipschitz(tree_space, [0, 2], f, 1.0)
    assert result.image == (1, 1, 3, 3)
    assert ultra_tools.verify_lipschitz(result, 1.0).holds


def test_extend_lipschitz_not_lipschitz(tree_space: FiniteMetricSpace) -> None:
    """Test the extend_lipschitz function rejects a map that stretches its subset."""
    part = metric_core.subspace(tree_space, [0, 1])
    f = MapTable(domain=part, codomain=tree_space, image=(0, 2))
    with pytest.raises(NotLipschitzOnSubsetError) as err:
        ultra_tools.extend_lipschitz(tree_space, [0, 1], f, 1.0)
    assert err.value.witness == (0, 1)
    assert err.value.ratio == 4.0
    result = ultra_tools.extend_lipschitz(tree_space, [0, 1], f, 4.0)
    assert ultra_tools.verify_lipschitz(result, 4.0).holds


def test_extend_lipschitz_domain_mismatch(tree_space: FiniteMetricSpace) -> None:
    """Test the extend_lipschitz function with a map on the wrong number of points."""
    part = metric_core.subspace(tree_space, [0, 1])
    f = MapTable(domain=part, codomain=tree_space, image=(0, 1))
    with pytest.raises(InvalidInputError):
        ultra_tools.extend_lipschitz(tree_space, [0, 1, 2], f, 1.0)


def test_map_table_partial(tree_space: FiniteMetricSpace) -> None:
    """Test a MapTable rejects missing or out-of-range images."""
    with pytest.raises(InvalidInputError):
        MapTable(domain=tree_space, codomain=tree_space, image=(0, 1))
    with pytest.raises(InvalidInputError):
        MapTable(domain=tree_space, codomain=tree_space, image=(0, 1, 2, 4))


def test_ball_partition_check(tree_space: FiniteMetricSpace, line_space: FiniteMetricSpace) -> None:
    """Test the ball_partition_check function on a tree and a line."""
    assert ultra_tools.ball_partition_check(tree_space, 0.25)
    assert ultra_tools.ball_partition_check(tree_space, 0.5)
    with pytest.raises(NotUltrametricError):
        ultra_tools.ball_partition_check(line_space, 1.0)


@settings(deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.data())
def test_retraction_properties(seed: int, data: st.DataObject) -> None:
    """Test retractions of random tree spaces fix the subset and are Lipschitz-1."""
    space = fractal_gen.random_tree_space(max_leaves=24, seed=seed)
    subset = sorted(data.draw(st.sets(st.integers(0, space.size - 1), min_size=1)))
    result = ultra_tools.retraction(space, subset)
    assert all(result.image[x] == x for x in subset)
    assert set(result.image) <= set(subset)
    assert ultra_tools.verify_lipschitz(result, 1.0).holds


@settings(deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.floats(min_value=0.0, max_value=2.0))
def test_balls_partition(seed: int, r: float) -> None:
    """Test closed balls of every radius partition a random tree space."""
    space = fractal_gen.random_tree_space(max_leaves=24, seed=seed)
    assert ultra_tools.ball_partition_check(space, r)


@settings(max_examples=500, deadline=None)
@given(st.integers(min_value=0, max_value=100_000), st.data())
def test_retraction_idempotent(seed: int, data: st.DataObject) -> None:
    """Test a retraction is idempotent and sends each point to a nearest point of the subset."""
    space = fractal_gen.random_tree_space(max_leaves=64, seed=seed)
    subset = sorted(data.draw(st.sets(st.integers(0, space.size - 1), min_size=1)))
    image = ultra_tools.retraction(space, subset).image
    assert all(image[image[x]] == image[x] for x in range(space.size))
    for x in range(space.size):
        radius = metric_core.distance_to_set(space, x, subset)
        assert image[x] in ultra_tools.sphere(space, x, radius)
        assert ultra_tools.sphere(space, x, radius) <= ultra_tools.closed_ball(space, x, radius)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=100_000), st.data())
def test_extend_lipschitz_keeps_constant(seed: int, data: st.DataObject) -> None:
    """Test extending a random map from a subset keeps its certified Lipschitz constant."""
    space = fractal_gen.random_tree_space(max_leaves=64, seed=seed)
    subset = sorted(data.draw(st.sets(st.integers(0, space.size - 1), min_size=1)))
    values = data.draw(
        st.lists(st.integers(0, space.size - 1), min_size=len(subset), max_size=len(subset))
    )
    f = MapTable(domain=metric_core.subspace(space, subset), codomain=space, image=tuple(values))
    constant = ultra_tools.verify_lipschitz(f, float("inf")).worst_ratio
    extended = ultra_tools.extend_lipschitz(space, subset, f, constant)
    assert all(extended.image[x] == y for x, y in zip(subset, values))
    check = ultra_tools.verify_lipschitz(extended, constant)
    assert check.holds
    assert check.worst_ratio == constant
