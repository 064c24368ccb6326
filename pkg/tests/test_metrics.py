"""Tests for the nondominated filter, purity and the spread metrics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from src.metrics import (
    DegenerateFront,
    EmptyFront,
    FrontArchive,
    MetricError,
    extreme_points,
    nondominated_filter,
    purity,
    reference_front,
    spread_metrics,
)


def brute_force_front(points):
    unique = sorted(set(points))
    return [
        p
        for p in unique
        if not any(all(a <= b for a, b in zip(q, p)) and any(a < b for a, b in zip(q, p)) for q in unique)
    ]


def test_filter_removes_dominated_and_duplicates():
    front = nondominated_filter(
        [(1.0, 2.0), (2.0, 1.0), (2.0, 2.0), (1.0, 2.0)],
        provenance=[("a", "P", 0), ("a", "P", 1), ("a", "P", 2), ("b", "P", 0)],
    )
    assert_array_equal(front.points, [[1.0, 2.0], [2.0, 1.0]])
    # the first copy of (1, 2) keeps its provenance
    assert front.provenance == [("a", "P", 0), ("a", "P", 1)]


def test_filter_keeps_weakly_equal_coordinates():
    front = nondominated_filter([(0.0, 1.0), (0.0, 2.0), (1.0, 0.0)])
    assert_array_equal(front.points, [[0.0, 1.0], [1.0, 0.0]])


def test_filter_empty_and_non_finite():
    assert len(nondominated_filter(np.zeros((0, 2)))) == 0
    with pytest.raises(ValueError):
        nondominated_filter([(0.0, np.inf)])


@pytest.mark.property
@settings(max_examples=200, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 3)).map(lambda t: tuple(map(float, t))),
        min_size=1,
        max_size=25,
    )
)
def test_filter_matches_brute_force(points):
    front = nondominated_filter(points)
    assert [tuple(row) for row in front.points] == brute_force_front(points)


def test_archive_shapes():
    single = FrontArchive(np.array([1.0, 2.0, 3.0]))
    assert len(single) == 1 and single.m == 3
    empty = FrontArchive.empty(2)
    assert len(empty) == 0 and empty.m == 2
    merged = single.union(FrontArchive(np.array([[0.0, 0.0, 0.0]]), [("s", "P", 4)]))
    assert len(merged) == 2
    assert merged.provenance == [None, ("s", "P", 4)]
    with pytest.raises(ValueError):
        FrontArchive(np.zeros((2, 2)), [None])


def test_purity_against_reference():
    a = nondominated_filter([(0.0, 1.0), (1.0, 0.5)])
    b = nondominated_filter([(1.0, 0.0), (0.5, 0.6)])
    ref = reference_front([a, b])
    assert_array_equal(ref.points, [[0.0, 1.0], [0.5, 0.6], [1.0, 0.0]])
    assert purity(a, ref) == pytest.approx(0.5)
    assert purity(b, ref) == 1.0


def test_purity_matches_within_tolerance():
    ref = FrontArchive(np.array([[0.0, 1.0]]))
    assert purity(FrontArchive(np.array([[1e-12, 1.0]])), ref) == 1.0
    assert purity(FrontArchive(np.array([[1e-6, 1.0]])), ref) == 0.0


def test_purity_of_empty_front():
    with pytest.raises(EmptyFront) as info:
        purity(FrontArchive.empty(2), FrontArchive(np.array([[0.0, 0.0]])))
    assert isinstance(info.value, MetricError)
    assert info.value.reason


def test_reference_of_empty_fronts():
    ref = reference_front([FrontArchive.empty(2), FrontArchive.empty(2)])
    assert len(ref) == 0 and ref.m == 2


def test_extreme_points():
    front = FrontArchive(np.array([[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]]))
    assert_array_equal(extreme_points(front), [[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(EmptyFront):
        extreme_points(FrontArchive.empty(2))


def test_spread_uniform_front():
    gamma, delta = spread_metrics(FrontArchive(np.array([[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]])))
    assert gamma == pytest.approx(math.sqrt(0.5))
    assert delta == pytest.approx(0.0, abs=1e-12)


def test_spread_uneven_front():
    gamma, delta = spread_metrics(FrontArchive(np.array([[0.0, 1.0], [0.9, 0.1], [1.0, 0.0]])))
    assert gamma == pytest.approx(0.9 * math.sqrt(2.0))
    assert delta == pytest.approx(0.8)


def test_spread_two_points():
    gamma, delta = spread_metrics(FrontArchive(np.array([[0.0, 1.0], [1.0, 0.0]])))
    assert gamma == pytest.approx(math.sqrt(2.0))
    assert delta == pytest.approx(0.0, abs=1e-12)


def test_spread_uses_reference_extremes():
    front = FrontArchive(np.array([[0.5, 0.5], [1.0, 0.0]]))
    extremes = np.array([[0.0, 1.0], [1.0, 0.0]])
    gamma, delta = spread_metrics(front, extremes)
    assert gamma == pytest.approx(math.sqrt(0.5))
    assert delta == pytest.approx(0.5)


def test_spread_three_objectives():
    front = FrontArchive(np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]))
    gamma, delta = spread_metrics(front)
    assert gamma == pytest.approx(1.0)
    assert delta == pytest.approx(1.0)


def test_spread_is_order_independent(rng):
    t = np.sort(rng.uniform(size=8))
    points = np.column_stack((t, 1.0 - np.sqrt(t)))
    shuffled = points[rng.permutation(len(points))]
    assert_allclose(spread_metrics(FrontArchive(points)), spread_metrics(FrontArchive(shuffled)))


@pytest.mark.parametrize(
    "points",
    [np.array([[0.3, 0.7]]), np.array([[0.3, 0.7], [0.3, 0.7]]), np.zeros((0, 2))],
)
def test_spread_needs_two_points(points):
    with pytest.raises(DegenerateFront):
        spread_metrics(FrontArchive(points))
