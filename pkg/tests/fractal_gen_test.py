"""The Fractal Gen test module.

This module contains tests for the sample generators.
"""

import math

import numpy as np
import pytest

from holdermap import fractal_gen, metric_core, ultra_tools
from holdermap.exceptions import (
    DepthTooLargeError,
    InvalidInputError,
    InvalidRatioError,
    NonDecreasingDiametersError,
    SscViolationError,
    TooManyPointsError,
)
from holdermap.schemas.fractal import CarpetSpec, IfsSpec, SimilarityMap
from holdermap.schemas.metric import FiniteMetricSpace, PointCloud

GASKET = IfsSpec(
    maps=[
        SimilarityMap(ratio=1 / 3, translation=(0.0, 0.0)),
        SimilarityMap(ratio=1 / 3, translation=(2 / 3, 0.0)),
        SimilarityMap(ratio=1 / 3, translation=(0.0, 2 / 3)),
    ]
)


def test_cantor_endpoints(cantor_cloud: PointCloud) -> None:
    """Test the cantor_endpoints function returns 2^(depth+1) sorted endpoints."""
    assert cantor_cloud.size == 16
    assert cantor_cloud.arity == 1
    values = cantor_cloud.points[:, 0]
    assert np.all(np.diff(values) > 0)
    assert values[0] == 0.0
    assert values[-1] == 1.0


def test_cantor_endpoints_first_step() -> None:
    """Test the cantor_endpoints function after one step."""
    values = fractal_gen.cantor_endpoints(1).points[:, 0]
    np.testing.assert_allclose(values, [0, 1 / 3, 2 / 3, 1])


def test_cantor_endpoints_hole() -> None:
    """Test the cantor_endpoints function with a middle half removed."""
    values = fractal_gen.cantor_endpoints(1, hole="1/2").points[:, 0]
    np.testing.assert_array_equal(values, [0, 0.25, 0.75, 1])


def test_cantor_endpoints_depth_zero() -> None:
    """Test the cantor_endpoints function without any step."""
    np.testing.assert_array_equal(fractal_gen.cantor_endpoints(0).points[:, 0], [0, 1])


def test_cantor_endpoints_too_deep() -> None:
    """Test the cantor_endpoints function above its depth limit."""
    with pytest.raises(DepthTooLargeError):
        fractal_gen.cantor_endpoints(fractal_gen.MAX_CANTOR_DEPTH + 1)


@pytest.mark.parametrize(("depth", "hole"), [(-1, "1/3"), (2, 0), (2, 1)])
def test_cantor_endpoints_invalid(depth: int, hole: str) -> None:
    """Test the cantor_endpoints function with a negative depth or degenerate hole."""
    with pytest.raises(InvalidInputError):
        fractal_gen.cantor_endpoints(depth, hole=hole)


def test_middle_c_cantor_spec() -> None:
    """Test the middle_c_cantor_spec function matches the endpoint construction."""
    spec = fractal_gen.middle_c_cantor_spec()
    assert spec.ratios == pytest.approx([1 / 3, 1 / 3])
    values = fractal_gen.ifs_sample(spec, 2).points[:, 0]
    np.testing.assert_allclose(values, [0, 2 / 9, 2 / 3, 8 / 9])


def test_attractor_box() -> None:
    """Test the attractor_box function spans the fixed points."""
    low, high = fractal_gen.attractor_box(GASKET)
    np.testing.assert_allclose(low, [0, 0])
    np.testing.assert_allclose(high, [1, 1])


def test_check_separation() -> None:
    """Test the check_separation function with overlapping maps."""
    spec = IfsSpec(
        maps=[
            SimilarityMap(ratio=0.6, translation=(0.0,)),
            SimilarityMap(ratio=0.6, translation=(0.2,)),
        ]
    )
    with pytest.raises(SscViolationError) as err:
        fractal_gen.check_separation(spec)
    assert (err.value.i, err.value.j) == (0, 1)
    with pytest.raises(SscViolationError):
        fractal_gen.ifs_sample(spec, 1)


def test_ifs_sample() -> None:
    """Test the ifs_sample function yields m^depth distinct points."""
    cloud = fractal_gen.ifs_sample(GASKET, 3)
    assert cloud.size == 27
    assert cloud.arity == 2
    assert metric_core.from_points(cloud).size == 27


def test_ifs_sample_too_many() -> None:
    """Test the ifs_sample function above its point cap."""
    with pytest.raises(TooManyPointsError) as err:
        fractal_gen.ifs_sample(GASKET, 5, max_points=100)
    assert err.value.count == 243


def test_ifs_spec_invalid() -> None:
    """Test an IfsSpec with mixed arities or a ratio outside (0, 1)."""
    with pytest.raises(InvalidInputError):
        IfsSpec(
            maps=[
                SimilarityMap(ratio=0.5, translation=(0.0,)),
                SimilarityMap(ratio=0.5, translation=(0.5, 0.5)),
            ]
        )
    with pytest.raises(InvalidRatioError):
        SimilarityMap(ratio=1.5, translation=(0.0,))


def test_carpet_sample() -> None:
    """Test the carpet_sample function after one step."""
    spec = CarpetSpec(m=2, n=3, pattern=[(0, 0), (2, 1)])
    cloud = fractal_gen.carpet_sample(spec, 1)
    np.testing.assert_allclose(cloud.points, [[0, 0], [2 / 3, 1 / 2]])
    assert fractal_gen.carpet_sample(spec, 4).size == 16


def test_carpet_spec_invalid() -> None:
    """Test a CarpetSpec with more rows than columns or a cell outside the grid."""
    with pytest.raises(InvalidInputError):
        CarpetSpec(m=3, n=2, pattern=[(0, 0)])
    with pytest.raises(InvalidInputError):
        CarpetSpec(m=2, n=3, pattern=[(3, 0)])
    with pytest.raises(InvalidInputError):
        CarpetSpec(m=2, n=3, pattern=[(1, 1), (1, 1)])


def test_mcmullen_ubdim() -> None:
    """Test the mcmullen_ubdim function on a carpet of dimension log_3 2."""
    spec = CarpetSpec(
        m=9,
        n=81,
        pattern=[(0, 0), (40, 0), (80, 0), (0, 8), (20, 8), (40, 8), (60, 8), (80, 8)],
    )
    assert spec.rows == {0, 8}
    assert fractal_gen.mcmullen_ubdim(spec) == pytest.approx(math.log(2) / math.log(3))


def test_ultrametric_tree_space(tree_space: FiniteMetricSpace) -> None:
    """Test the ultrametric_tree_space function on a two-level binary tree."""
    assert tree_space.labels == ["0.0", "0.1", "1.0", "1.1"]
    assert tree_space.distance(0, 1) == 0.25
    assert tree_space.distance(0, 2) == 1.0
    assert tree_space.distance(1, 3) == 1.0
    assert ultra_tools.is_ultrametric(tree_space).is_ultrametric


def test_ultrametric_tree_space_invalid() -> None:
    """Test the ultrametric_tree_space function with bad levels or too many leaves."""
    with pytest.raises(InvalidInputError):
        fractal_gen.ultrametric_tree_space([2], [1.0, 0.5])
    with pytest.raises(NonDecreasingDiametersError):
        fractal_gen.ultrametric_tree_space([2, 2], [0.5, 1.0])
    with pytest.raises(TooManyPointsError):
        fractal_gen.ultrametric_tree_space([10, 10], [1.0, 0.5], max_leaves=50)


def test_uniform_grid() -> None:
    """Test the uniform_grid function."""
    np.testing.assert_array_equal(fractal_gen.uniform_grid(5).points[:, 0], [0, 0.25, 0.5, 0.75, 1])
    assert fractal_gen.uniform_grid(1).size == 1
    with pytest.raises(InvalidInputError):
        fractal_gen.uniform_grid(0)


def test_random_cloud() -> None:
    """Test the random_cloud function is reproducible from its seed."""
    first = fractal_gen.random_cloud(10, arity=3, seed=7)
    assert first.points.shape == (10, 3)
    np.testing.assert_array_equal(first.points, fractal_gen.random_cloud(10, arity=3, seed=7).points)


@pytest.mark.parametrize("seed", range(5))
def test_random_tree_space(seed: int) -> None:
    """Test the random_tree_space function yields ultrametric spaces within the leaf cap."""
    space = fractal_gen.random_tree_space(max_leaves=64, seed=seed)
    assert 2 <= space.size <= 64
    assert ultra_tools.is_ultrametric(space).is_ultrametric
