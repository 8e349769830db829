"""The Lip Cover test module.

This module contains tests for F(A, B), the least number of Lipschitz-1 images covering B.
"""

import math

import pytest
from hypothesis import given, settings, strategies as st

from holdermap import fractal_gen, lip_cover, metric_core
from holdermap.exceptions import InvalidInputError, SearchSpaceTooLargeError
from holdermap.schemas.cover import TruncatedCoverValue
from holdermap.schemas.metric import FiniteMetricSpace, PointCloud
from tests.strategies import integer_metrics


def _is_lipschitz(source: FiniteMetricSpace, target: FiniteMetricSpace, f: tuple[int, ...]) -> bool:
    return all(
        target.distance(f[i], f[j]) <= source.distance(i, j)
        for i in range(source.size)
        for j in range(source.size)
    )


def test_lip1_image_family(line_space: FiniteMetricSpace) -> None:
    """Test the lip1_image_family function keeps only the maximal images."""
    pair = metric_core.validate([[0, 1], [1, 0]])
    assert lip_cover.lip1_image_family(pair, line_space) == [(0, 1), (1, 2)]


def test_f_cover_number(line_space: FiniteMetricSpace) -> None:
    """Test the f_cover_number function needs two unit segments for a segment of length 2."""
    pair = metric_core.validate([[0, 1], [1, 0]])
    witness = lip_cover.f_cover_number(pair, line_space)
    assert witness.k == 2
    assert witness.maps == [(0, 1), (1, 2)]
    assert witness.images == [(0, 1), (1, 2)]


def test_f_cover_number_wide_source(line_space: FiniteMetricSpace) -> None:
    """Test the f_cover_number function when every pair of B is an image of A."""
    pair = metric_core.validate([[0, 2], [2, 0]])
    assert len(lip_cover.lip1_image_family(pair, line_space)) == 3
    assert lip_cover.f_cover_number(pair, line_space).k == 2


def test_f_cover_number_single_point(square_space: FiniteMetricSpace) -> None:
    """Test a single point needs one image per point of B."""
    witness = lip_cover.f_cover_number(PointCloud(points=[0.0]), square_space)
    assert witness.k == 4
    assert sorted(witness.images) == [(0,), (1,), (2,), (3,)]


def test_f_cover_number_too_large(square_space: FiniteMetricSpace) -> None:
    """Test the f_cover_number function above its enumeration and family caps."""
    with pytest.raises(SearchSpaceTooLargeError) as err:
        lip_cover.f_cover_number(square_space, square_space, max_maps=100)
    assert err.value.size == 256
    with pytest.raises(SearchSpaceTooLargeError):
        lip_cover.f_cover_number(PointCloud(points=[0.0]), square_space, max_family=3)


def test_f_cover_number_empty(line_space: FiniteMetricSpace) -> None:
    """Test the f_cover_number function with an empty source."""
    with pytest.raises(InvalidInputError):
        lip_cover.f_cover_number(PointCloud(points=[]), line_space)


def test_truncated_cover_values() -> None:
    """Test the truncated_cover_values function on a Cantor set against itself."""
    spec = fractal_gen.middle_c_cantor_spec()
    values = lip_cover.truncated_cover_values(spec, spec, [1, 2])
    assert values == [TruncatedCoverValue(depth=1, k=1), TruncatedCoverValue(depth=2, k=1)]


def test_truncated_cover_values_smaller_source() -> None:
    """Test a thinner Cantor set needs more than one image of a fatter one at depth 2."""
    thin = fractal_gen.middle_c_cantor_spec("1/2")
    fat = fractal_gen.middle_c_cantor_spec()
    (value,) = lip_cover.truncated_cover_values(thin, fat, [2])
    assert value.depth == 2
    assert value.k >= 2


@settings(deadline=None)
@given(integer_metrics())
def test_f_cover_number_self(space: FiniteMetricSpace) -> None:
    """Test a space is one Lipschitz-1 image of itself."""
    witness = lip_cover.f_cover_number(space, space)
    assert witness.k == 1
    assert witness.images == [tuple(range(space.size))]


@settings(deadline=None)
@given(integer_metrics(), integer_metrics())
def test_f_cover_witness(source: FiniteMetricSpace, target: FiniteMetricSpace) -> None:
    """Test every witness map is Lipschitz-1 and the images cover B."""
    witness = lip_cover.f_cover_number(source, target)
    assert 1 <= witness.k <= target.size
    assert all(_is_lipschitz(source, target, f) for f in witness.maps)
    assert all(image == tuple(sorted(set(f))) for f, image in zip(witness.maps, witness.images))
    assert set().union(*witness.images) == set(range(target.size))


@settings(max_examples=100, deadline=None)
@given(integer_metrics(), integer_metrics(max_size=6), st.sampled_from([0.5, 2.0, 3.0]))
def test_f_cover_number_scaling(
    source: FiniteMetricSpace, target: FiniteMetricSpace, factor: float
) -> None:
    """Test F(rA, rB) = F(A, B)."""
    scaled = lip_cover.f_cover_number(
        metric_core.scale(source, factor), metric_core.scale(target, factor)
    )
    assert scaled.k == lip_cover.f_cover_number(source, target).k


@settings(max_examples=100, deadline=None)
@given(
    integer_metrics(max_size=2),
    integer_metrics(max_size=6),
    st.sampled_from([0.5, 1.0, 2.0]),
    st.integers(min_value=2, max_value=4),
)
def test_f_cover_number_copies(
    piece: FiniteMetricSpace, target: FiniteMetricSpace, factor: float, copies: int
) -> None:
    """Test N separated copies of rA0 against ceil(F(rA0, B) / N), with equality when far apart."""
    copies = min(copies, 4 // piece.size)
    scaled = metric_core.scale(piece, factor)
    single = lip_cover.f_cover_number(scaled, target).k
    bound = math.ceil(single / copies)

    near = max(metric_core.diameter(scaled), 0.5)
    source, _ = metric_core.gapped_union([scaled] * copies, gap=near)
    assert lip_cover.f_cover_number(source, target).k >= bound

    far = max(near, metric_core.diameter(target))
    source, _ = metric_core.gapped_union([scaled] * copies, gap=far)
    assert lip_cover.f_cover_number(source, target).k == bound


@settings(max_examples=100, deadline=None)
@given(integer_metrics(), st.lists(integer_metrics(max_size=3), min_size=2, max_size=2))
def test_f_cover_number_additive(source: FiniteMetricSpace, parts: list[FiniteMetricSpace]) -> None:
    """Test F(A, B) is the sum over parts of B separated by more than diam A."""
    gap = max(metric_core.diameter(x) for x in [source, *parts]) + 1
    target, _ = metric_core.gapped_union(parts, gap=gap)
    expected = sum(lip_cover.f_cover_number(source, x).k for x in parts)
    assert lip_cover.f_cover_number(source, target).k == expected
