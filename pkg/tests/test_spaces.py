"""Tests for snake.asymmetric.spaces."""

import numpy as np
import pytest
from hypothesis import given, strategies as st
from pydantic import TypeAdapter, ValidationError

from snake.asymmetric import spaces
from snake.asymmetric.exceptions import (
    DimensionError, EmptySampleError, InvalidPointError,
    PointNotInTableError)


finite = st.floats(-100, 100, allow_nan=False, allow_infinity=False)
planar = st.tuples(finite, finite)


@pytest.mark.parametrize(
    "coords,expected",
    [(1.5, [1.5]),
     ([1, 2], [1.0, 2.0]),
     (np.array([0.25]), [0.25])])
def test_as_point(coords, expected):
    point = spaces.as_point(coords)
    assert point.tolist() == expected
    assert point.dtype == np.float64
    assert not point.flags.writeable


@pytest.mark.parametrize(
    "coords",
    [[], [np.nan], [1.0, np.inf], [[1.0, 2.0]]])
def test_as_point_invalid(coords):
    with pytest.raises(InvalidPointError):
        spaces.as_point(coords)


def test_as_points_dimension_mismatch():
    with pytest.raises(DimensionError):
        spaces.as_points([[1.0], [1.0, 2.0]])


@pytest.mark.parametrize(
    "desc,x,y,expected",
    [(spaces.LineOnesidedDistance(), 1, 3, 2.0),
     (spaces.LineOnesidedDistance(), 3, 1, 0.0),
     (spaces.LineQuarterDistance(), 1, 0, 0.25),
     (spaces.LineQuarterDistance(), 0, 1, 1.0),
     (spaces.NormForwardDistance(norm=spaces.UpperNorm()), 1, 3, 2.0),
     (spaces.NormForwardDistance(norm=spaces.UpperNorm()), 3, 1, 0.0),
     (spaces.SymmetricDistance(p="manhattan"), [0, 0], [1, -2], 3.0)])
def test_eval_distance(desc, x, y, expected):
    """Closed forms of the line and symmetric distances."""
    assert spaces.eval_distance(desc, x, y) == expected


@pytest.mark.parametrize(
    "desc",
    [spaces.LineOnesidedDistance(),
     spaces.LineQuarterDistance(),
     spaces.NormForwardDistance(norm=spaces.UpperNorm()),
     spaces.NormBackwardDistance(norm=spaces.UpperNorm())])
def test_eval_distance_diagonal(desc):
    assert desc(0.7, 0.7) == 0


@pytest.mark.parametrize(
    "desc,v,expected",
    [(spaces.PlanarMaxNorm(), [1, 2], 3.0),
     (spaces.PlanarMaxNorm(), [-1, -2], 0.0),
     (spaces.PlanarMaxNorm(), [1, 0], 1.0),
     (spaces.PlanarMaxNorm(), [0, -1], 0.0),
     (spaces.UpperNorm(), [-5], 0.0),
     (spaces.UpperNorm(), [5], 5.0),
     (spaces.WeightedUpperNorm(weights=(1.0, 2.0)), [1, 1], 3.0),
     (spaces.WeightedUpperNorm(weights=(1.0, 2.0)), [-1, 1], 2.0),
     (spaces.SymmetricLiftNorm(q="euclidean"), [3, 4], 5.0),
     (spaces.ScaledNorm(base=spaces.UpperNorm(), factor=2.0), [1.5], 3.0),
     (spaces.PlanarMaxNorm(), [0, 0], 0.0)])
def test_eval_norm(desc, v, expected):
    """Closed forms of the asymmetric norms."""
    assert spaces.eval_norm(desc, v) == expected


def test_eval_norm_dimension_mismatch():
    with pytest.raises(DimensionError):
        spaces.PlanarMaxNorm().evaluate([1.0])
    with pytest.raises(DimensionError):
        spaces.PlanarMaxNorm().evaluate_many(np.zeros((3, 3)))


def test_evaluate_many_matches_evaluate():
    norm = spaces.PlanarMaxNorm()
    vectors = np.array([[1.0, 2.0], [-1.0, -2.0], [0.5, -0.25]])
    assert (
        norm.evaluate_many(vectors).tolist()
        == [norm.evaluate(v) for v in vectors])


def test_induced_distance_directions():
    """``‖(1, 2)"""
    norm = spaces.PlanarMaxNorm()
    forward = spaces.induced_distance(norm, spaces.Direction.FORWARD)
    backward = spaces.induced_distance(norm, "backward")
    assert isinstance(forward, spaces.NormForwardDistance)
    assert isinstance(backward, spaces.NormBackwardDistance)
    assert forward([0, 0], [1, 2]) == 3.0
    assert backward([0, 0], [1, 2]) == 0.0


@given(planar, planar)
def test_transposition_identity(x, y):
    """The backward distance is the forward one with arguments swapped."""
    norm = spaces.PlanarMaxNorm()
    forward = spaces.induced_distance(norm, spaces.Direction.FORWARD)
    backward = spaces.induced_distance(norm, spaces.Direction.BACKWARD)
    assert forward(x, y) == backward(y, x)


@given(planar)
def test_norm_homogeneity_exact(v):
    norm = spaces.PlanarMaxNorm()
    assert norm.evaluate(np.multiply(0.0, v)) == 0.0
    assert norm.evaluate(np.multiply(1.0, v)) == norm.evaluate(v)
    assert norm.evaluate(v) >= 0


@pytest.mark.parametrize(
    "direction,expected",
    [(spaces.Direction.FORWARD, [True, False, True, False]),
     (spaces.Direction.BACKWARD, [True, True, False, True])])
def test_ball_contains(direction, expected):
    """Balls of radius 1/2 about 0 on the one-sided line."""
    dist = spaces.LineOnesidedDistance()
    assert (
        [spaces.ball_contains(dist, 0, 0.5, p, direction)
         for p in (0.4, 5, -3, 3)]
        == expected)


def test_finite_table_distance():
    table = spaces.FiniteTableDistance(
        points=((0.0, ), (1.0, )),
        values=((0.0, 2.0), (0.5, 0.0)))
    assert table(0, 1) == 2.0
    assert table(1, 0) == 0.5
    assert table.dim == 1
    with pytest.raises(PointNotInTableError):
        table(0, 0.5)


@pytest.mark.parametrize(
    "points,values",
    [(((0.0, ), (0.0, )), ((0.0, 1.0), (1.0, 0.0))),
     (((0.0, ), (1.0, )), ((0.0, 1.0), )),
     (((0.0, ), (1.0, )), ((0.0, -1.0), (1.0, 0.0))),
     (((0.0, ), (1.0, )), ((1.0, 1.0), (1.0, 0.0)))])
def test_finite_table_distance_invalid(points, values):
    with pytest.raises(ValidationError):
        spaces.FiniteTableDistance(points=points, values=values)


def test_descriptors_roundtrip_through_json():
    adapter = TypeAdapter(spaces.NormDescriptor)
    norm = adapter.validate_python(
        dict(kind="scaled", factor=2.0, base=dict(kind="planar_max")))
    assert isinstance(norm, spaces.ScaledNorm)
    assert isinstance(norm.base, spaces.PlanarMaxNorm)
    with pytest.raises(ValidationError):
        adapter.validate_python(dict(kind="planar_max", extra=1))
    with pytest.raises(ValidationError):
        adapter.validate_python(dict(kind="nope"))


def test_descriptors_frozen():
    norm = spaces.WeightedUpperNorm(weights=(1.0, ))
    with pytest.raises(ValidationError):
        norm.weights = (2.0, )


@pytest.mark.parametrize(
    "desc",
    [spaces.LineOnesidedDistance(),
     spaces.LineQuarterDistance(),
     spaces.NormForwardDistance(norm=spaces.UpperNorm()),
     spaces.NormBackwardDistance(norm=spaces.UpperNorm())])
def test_check_distance_axioms_line(desc):
    grid = [-1.0, -0.5, 0.0, 0.5, 1.0]
    report = spaces.check_distance_axioms(desc, grid, tol=1e-12)
    assert report.consistent
    assert report.sample_size == 5
    assert report.to_dict()["violations"] == []


def test_check_distance_axioms_symmetric():
    sample = [(0, 0), (1, 0), (0.3, -2), (5, 5)]
    report = spaces.check_distance_axioms(
        spaces.SymmetricDistance(), sample)
    assert report.consistent


def test_check_distance_axioms_separation():
    table = spaces.FiniteTableDistance(
        points=((0.0, ), (1.0, )),
        values=((0.0, 0.0), (0.0, 0.0)))
    report = spaces.check_distance_axioms(table, [[0.0], [1.0]])
    assert not report.consistent
    (violation, ) = report.by_axiom("AD2")
    assert [p.tolist() for p in violation.witness] == [[0.0], [1.0]]


def test_check_distance_axioms_triangle():
    """``d(0, 2) = 5`` exceeds ``d(0, 1) + d(1, 2) = 2`` by 3."""
    table = spaces.FiniteTableDistance(
        points=((0.0, ), (1.0, ), (2.0, )),
        values=((0.0, 1.0, 5.0), (1.0, 0.0, 1.0), (1.0, 1.0, 0.0)))
    report = spaces.check_distance_axioms(table, table.points)
    (violation, ) = report.by_axiom("AD3")
    assert [p.tolist() for p in violation.witness] == [[0.0], [1.0], [2.0]]
    assert violation.excess == 3.0


def test_check_distance_axioms_empty():
    with pytest.raises(EmptySampleError):
        spaces.check_distance_axioms(spaces.LineQuarterDistance(), [])


def test_check_norm_axioms_planar_max():
    """The planar max norm passes on a 5x5 grid."""
    axis = [-1.0, -0.5, 0.0, 0.5, 1.0]
    grid = [(x, y) for x in axis for y in axis]
    report = spaces.check_norm_axioms(
        spaces.PlanarMaxNorm(), grid, (0.0, 0.5, 2.0), tol=1e-12)
    assert report.consistent
    assert report.sample_size == 25


def test_check_norm_axioms_scaled_upper():
    norm = spaces.ScaledNorm(base=spaces.UpperNorm(), factor=1.0)
    assert spaces.check_norm_axioms(norm, [-1, 0, 1]).consistent


class ShiftedNorm:
    """``‖v| - 1``: breaks non-negativity."""

    def evaluate(self, v):
        return spaces.UpperNorm().evaluate(v) - 1


def test_check_norm_axioms_broken():
    report = spaces.check_norm_axioms(ShiftedNorm(), [-1, 0, 1])
    assert report.by_axiom("AN1")
    assert not report.consistent


def test_check_norm_axioms_negative_scalar():
    with pytest.raises(ValueError):
        spaces.check_norm_axioms(spaces.UpperNorm(), [1], scalars=(-1, ))


@pytest.mark.parametrize(
    "norm",
    [spaces.PlanarMaxNorm(),
     spaces.WeightedUpperNorm(weights=(2.0, 0.5)),
     spaces.SymmetricLiftNorm(q="chebyshev", dimension=2),
     spaces.ScaledNorm(base=spaces.PlanarMaxNorm(), factor=3.0)])
def test_induced_distances_pass_axioms(norm):
    sample = [
        (x, y)
        for x in np.linspace(-1, 1, 5)
        for y in np.linspace(-1, 1, 5)]
    for direction in spaces.Direction:
        report = spaces.check_distance_axioms(
            spaces.induced_distance(norm, direction), sample)
        assert report.consistent
