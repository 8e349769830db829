"""The Conftest module.

This module contains pytest fixtures.
"""

import numpy as np
import pytest

from holdermap import fractal_gen, metric_core
from holdermap.schemas.metric import FiniteMetricSpace, PointCloud


@pytest.fixture(scope="session")
def cantor_cloud() -> PointCloud:
    """Set the 16 endpoints of the depth-3 Cantor construction fixture."""
    return fractal_gen.cantor_endpoints(depth=3)


@pytest.fixture(scope="session")
def line_space() -> FiniteMetricSpace:
    """Set the fixture of the points 0, 1 and 2 on the line."""
    return metric_core.validate([[0, 1, 2], [1, 0, 1], [2, 1, 0]])


@pytest.fixture(scope="session")
def tree_space() -> FiniteMetricSpace:
    """Set the fixture of a binary tree with two levels and leaf distances 1 and 1/4."""
    return fractal_gen.ultrametric_tree_space([2, 2], [1.0, 0.25])


@pytest.fixture(scope="session")
def square_space() -> FiniteMetricSpace:
    """Set the fixture of the corners of the unit square, Euclidean."""
    return metric_core.from_points(PointCloud(points=[[0, 0], [1, 0], [1, 1], [0, 1]]))


@pytest.fixture
def rng() -> np.random.Generator:
    """Set a freshly seeded numpy generator fixture."""
    return np.random.default_rng(20240917)
