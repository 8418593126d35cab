"""Tests for snake.asymmetric.geometry."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from snake.asymmetric import geometry, maps, spaces
from snake.asymmetric.exceptions import (
    DegenerateHullError, DimensionError, EmptySampleError,
    PointNotInSetError, PointNotInTableError)


PLANAR = spaces.PlanarMaxNorm()
SQUARE = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
PAIR = geometry.FiniteSubset.of([(0, 0), (1, 0)], PLANAR)
TRIPLE = geometry.FiniteSubset.of([(0, 0), (1, 0), (0.5, 0)], PLANAR)
SINGLE = geometry.FiniteSubset.of([(0.3, -0.2)], PLANAR)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
planar = st.tuples(finite, finite)


def test_finite_subset():
    assert len(TRIPLE) == 3
    assert TRIPLE.dim == 2
    assert (0.5, 0) in TRIPLE
    assert (0.5, 1) not in TRIPLE
    assert TRIPLE.index([1, 0]) == 1
    assert TRIPLE.as_array().shape == (3, 2)
    assert TRIPLE.to_dict() == dict(
        points=[[0.0, 0.0], [1.0, 0.0], [0.5, 0.0]],
        norm=dict(kind="planar_max"))
    with pytest.raises(PointNotInSetError):
        TRIPLE.index((2, 2))


@pytest.mark.parametrize(
    "points,norm,error",
    [([], PLANAR, EmptySampleError),
     ([(0, 0), (0, 0)], PLANAR, ValueError),
     ([(0, ), (1, )], PLANAR, DimensionError),
     ([(0, ), (1, 2)], None, DimensionError)])
def test_finite_subset_invalid(points, norm, error):
    with pytest.raises(error):
        geometry.FiniteSubset.of(points, norm)


def test_finite_subset_without_norm():
    subset = geometry.FiniteSubset.of([(0, 0)])
    with pytest.raises(ValueError):
        subset.norm
    assert subset.to_dict()["norm"] is None


@pytest.mark.parametrize(
    "subset,expected",
    [(PAIR, 1.0),
     (SINGLE, 0.0),
     (geometry.FiniteSubset.of([(0, 0), (0, 1)], PLANAR), 1.0),
     (TRIPLE, 1.0),
     (geometry.FiniteSubset.of(SQUARE, PLANAR), 4.0)])
def test_diameter(subset, expected):
    """Diameters under the planar max norm."""
    assert geometry.diameter(subset) == expected


def test_radii():
    """The upward pair has forward radius 1 and backward radius 0
    about the origin."""
    assert geometry.forward_radius((0, 0), PAIR) == 1.0
    assert geometry.backward_radius((0, 0), PAIR) == 1.0
    assert geometry.forward_radius((0.5, 0), TRIPLE) == 0.5
    assert geometry.forward_radius((0.3, -0.2), SINGLE) == 0.0
    assert geometry.backward_radius((0.3, -0.2), SINGLE) == 0.0
    up = geometry.FiniteSubset.of([(0, 0), (0, 1)], PLANAR)
    assert geometry.forward_radius((0, 0), up) == 1.0
    assert geometry.backward_radius((0, 0), up) == 0.0
    with pytest.raises(DimensionError):
        geometry.forward_radius((0, ), PAIR)


@given(st.lists(planar, min_size=1, max_size=6, unique=True))
def test_diameter_is_largest_radius(points):
    """The diameter is the largest radius in both directions."""
    subset = geometry.FiniteSubset.of(points, PLANAR)
    diam = geometry.diameter(subset)
    assert diam == max(
        geometry.forward_radius(u, subset) for u in subset.points)
    assert diam == max(
        geometry.backward_radius(u, subset) for u in subset.points)


def test_is_forward_diametral():
    assert geometry.is_forward_diametral((0, 0), PAIR)
    assert geometry.is_forward_diametral((1, 0), PAIR)
    assert geometry.is_forward_diametral((0.3, -0.2), SINGLE)
    assert not geometry.is_forward_diametral((0.5, 0), TRIPLE)
    with pytest.raises(PointNotInSetError):
        geometry.is_forward_diametral((0.5, 0), PAIR)


def test_normal_structure_witness():
    """The midpoint of the triple has radius 1/2 against diameter 1."""
    witness = geometry.normal_structure_witness(TRIPLE)
    assert witness.point.tolist() == [0.5, 0.0]
    assert witness.radius == 0.5
    assert witness.diameter == 1.0
    assert not witness.degenerate
    assert geometry.find_forward_nondiametral(TRIPLE).tolist() == [0.5, 0.0]
    assert geometry.find_forward_nondiametral(PAIR) is None
    assert not geometry.normal_structure_witness(PAIR).degenerate
    degenerate = geometry.normal_structure_witness(SINGLE)
    assert degenerate.degenerate
    assert degenerate.to_dict() == dict(
        point=None, radius=None, diameter=0.0, degenerate=True)


def test_bounded_witness():
    """The triple fits a ball of radius 2 about its first point."""
    witness = geometry.bounded_witness(TRIPLE)
    assert witness.center.tolist() == [0.0, 0.0]
    assert witness.radius == 2.0
    assert witness.f_contained
    assert witness.b_contained
    assert witness.to_dict()["r0"] == 2.0


CYCLES = maps.TableMap(
    points=((0, ), (1, ), (2, ), (3, ), (4, )),
    images=((1, ), (0, ), (2, ), (2, ), (3, )))


def test_functional_graph():
    graph = geometry.functional_graph(
        spaces.as_points(CYCLES.points), CYCLES)
    assert sorted(graph.edges) == [(0, 1), (1, 0), (2, 2), (3, 2), (4, 3)]


def test_minimal_invariant_sets():
    sets = geometry.minimal_invariant_sets(None, CYCLES)
    assert [s.to_dict()["points"] for s in sets] == [
        [[0.0], [1.0]],
        [[2.0]]]
    assert [p.tolist() for p in geometry.periodic_points(None, CYCLES)] == [
        [0.0], [1.0], [2.0]]


def test_minimal_invariant_sets_subset():
    sets = geometry.minimal_invariant_sets([(2, ), (3, )], CYCLES)
    assert [s.to_dict()["points"] for s in sets] == [[[2.0]]]
    with pytest.raises(PointNotInTableError):
        geometry.minimal_invariant_sets([(0, ), (4, )], CYCLES)
    with pytest.raises(ValueError):
        geometry.minimal_invariant_sets([(2, ), (2, )], CYCLES)


def _brute_force_minimal(successors):
    size = len(successors)
    full = 1 << size
    images = [0] * full
    for mask in range(1, full):
        low = (mask & -mask).bit_length() - 1
        images[mask] = images[mask & (mask - 1)] | (1 << successors[low])
    invariant = [
        mask and not images[mask] & ~mask
        for mask in range(full)]
    minimal = []
    for mask in range(1, full):
        if not invariant[mask]:
            continue
        sub = (mask - 1) & mask
        while sub and not invariant[sub]:
            sub = (sub - 1) & mask
        if not sub:
            minimal.append(
                [i for i in range(size) if mask >> i & 1])
    return sorted(minimal)


@pytest.mark.parametrize("seed", range(100))
def test_minimal_invariant_sets_brute_force(seed):
    """Minimal invariant sets agree with a subset enumeration."""
    rng = np.random.default_rng(seed)
    size = int(rng.integers(1, 11))
    successors = [int(i) for i in rng.integers(0, size, size=size)]
    table = maps.TableMap(
        points=tuple((float(i), ) for i in range(size)),
        images=tuple((float(i), ) for i in successors))
    found = [
        [int(p[0]) for p in s.points]
        for s in geometry.minimal_invariant_sets(None, table)]
    assert found == _brute_force_minimal(successors)
    periodic = sorted(i for s in found for i in s)
    assert [
        int(p[0]) for p in geometry.periodic_points(None, table)
    ] == periodic


def test_hull_weights():
    """Hull membership of points inside and outside the square."""
    inside = geometry.hull_weights(SQUARE, (0.5, 0.5))
    assert inside.member
    assert inside.weights.sum() == pytest.approx(1)
    assert np.all(inside.weights >= 0)
    assert (inside.weights @ np.array(SQUARE, dtype=float)).tolist() == (
        pytest.approx([0.5, 0.5]))
    outside = geometry.hull_weights(SQUARE, (2, 0))
    assert not outside.member
    assert outside.weights is None
    assert outside.infeasibility > 0
    assert geometry.hull_membership(SQUARE, (1, 1))
    assert geometry.hull_membership(SQUARE, (0, 0))
    assert geometry.hull_membership([(0, ), (1, )], (0.25, ))
    assert not geometry.hull_membership([(0, ), (1, )], (-0.25, ))


@pytest.mark.parametrize(
    "vertices,z,error",
    [([], (0, 0), EmptySampleError),
     (SQUARE, (0, ), DimensionError),
     ([(1, 1), (1, 1)], (1, 1), DegenerateHullError)])
def test_hull_weights_invalid(vertices, z, error):
    with pytest.raises(error):
        geometry.hull_weights(vertices, z)


def test_mch_check_shrinking_map():
    """The corners of the square lie outside the hull of its halved image."""
    half = maps.AffineMap(matrix=((0.5, 0), (0, 0.5)))
    report = geometry.mch_check(SQUARE, half, SQUARE)
    assert not report.holds
    assert report.witness.tolist() == [1.0, 1.0]
    assert len(report.failures) == 4
    assert [p.tolist() for p in report.image_vertices][0] == [0.5, 0.5]


def test_mch_check_identity():
    identity = maps.AffineMap(matrix=((1, 0), (0, 1)))
    report = geometry.mch_check(SQUARE, identity, [*SQUARE, (0, 0)])
    assert report.holds
    assert report.witness is None
    assert report.to_dict()["sample_size"] == 5


def test_mch_check_constant_image():
    constant = maps.AffineMap(matrix=((0, 0), (0, 0)), offset=(0.5, 0))
    assert geometry.mch_check(SQUARE, constant, [(0.5, 0)]).holds
    assert not geometry.mch_check(SQUARE, constant, [(1, 0)]).holds
    with pytest.raises(EmptySampleError):
        geometry.mch_check(SQUARE, constant, [])
