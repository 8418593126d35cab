"""Diameters, radii, diametral points, invariant sets and hulls of finite
subsets of an asymmetric normed space."""

import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import networkx as nx
import numpy as np
import numpy.typing as npt

from snake.asymmetric.exceptions import (
    DegenerateHullError, DimensionError, EmptySampleError,
    PointNotInSetError, PointNotInTableError)
from snake.asymmetric.maps import TableMap
from snake.asymmetric.spaces import (
    DEFAULT_TOL, Direction, NormBase, Point, PointLike, as_point, as_points,
    ball_contains, check_dimension, induced_distance, point_key)

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class FiniteSubset:
    """Distinct points in canonical (input) order, with the norm they are
    measured by."""
    points: tuple[Point, ...]
    ambient_norm: NormBase | None = None

    def __post_init__(self) -> None:
        if not self.points:
            raise EmptySampleError("A finite subset needs at least one point")
        points = as_points(self.points)
        keys = [point_key(p) for p in points]
        if len(set(keys)) != len(keys):
            raise ValueError("Subset points must be pairwise distinct")
        if self.ambient_norm is not None:
            check_dimension(self.ambient_norm.dim, *points)
        object.__setattr__(self, "points", tuple(points))

    @classmethod
    def of(
            cls,
            points: Iterable[PointLike],
            norm: NormBase | None = None) -> "FiniteSubset":
        return cls(tuple(as_point(p) for p in points), norm)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point: object) -> bool:
        try:
            self.index(point)  # type: ignore[arg-type]
        except (PointNotInSetError, ValueError):
            return False
        return True

    @property
    def dim(self) -> int:
        return self.points[0].size

    @property
    def norm(self) -> NormBase:
        if self.ambient_norm is None:
            raise ValueError("Subset has no ambient norm")
        return self.ambient_norm

    def index(self, point: PointLike) -> int:
        key = point_key(point)
        for i, p in enumerate(self.points):
            if point_key(p) == key:
                return i
        raise PointNotInSetError(f"Point {list(key)} is not in the subset")

    def as_array(self) -> npt.NDArray[np.float64]:
        return np.vstack(self.points)

    def to_dict(self) -> dict:
        return dict(
            points=[p.tolist() for p in self.points],
            norm=(
                None
                if self.ambient_norm is None
                else self.ambient_norm.model_dump(mode="json")))


# DIAMETERS AND RADII


def _pairwise(K: FiniteSubset) -> npt.NDArray[np.float64]:
    """``values[u, v] = ‖v - u|`` over all ordered pairs."""
    pts = K.as_array()
    diffs = pts[np.newaxis, :, :] - pts[:, np.newaxis, :]
    size = len(pts)
    return K.norm.evaluate_many(diffs.reshape(-1, K.dim)).reshape(size, size)


def diameter(K: FiniteSubset) -> float:
    """``Diam(K)``: the largest ``‖v - u|`` over ordered pairs."""
    return float(_pairwise(K).max())


def forward_radius(u: PointLike, K: FiniteSubset) -> float:
    """``r^f_u(K)``: the largest ``‖v - u|`` over ``v`` in ``K``."""
    center = as_point(u)
    check_dimension(K.dim, center)
    return float(K.norm.evaluate_many(K.as_array() - center).max())


def backward_radius(u: PointLike, K: FiniteSubset) -> float:
    """``r^b_u(K)``: the largest ``‖u - v|`` over ``v`` in ``K``."""
    center = as_point(u)
    check_dimension(K.dim, center)
    return float(K.norm.evaluate_many(center - K.as_array()).max())


def is_forward_diametral(
        u: PointLike,
        K: FiniteSubset,
        tol: float = DEFAULT_TOL) -> bool:
    if u not in K:
        raise PointNotInSetError(
            f"Point {as_point(u).tolist()} is not a member of the subset")
    return diameter(K) - forward_radius(u, K) <= tol


@dataclass(frozen=True)
class NormalStructureWitness:
    """First forward non-diametral point, if any.

    ``degenerate`` marks a zero-diameter subset, which normal structure
    does not quantify over.
    """
    point: Point | None
    radius: float | None
    diameter: float
    degenerate: bool

    def to_dict(self) -> dict:
        return dict(
            point=None if self.point is None else self.point.tolist(),
            radius=self.radius,
            diameter=self.diameter,
            degenerate=self.degenerate)


def normal_structure_witness(
        K: FiniteSubset,
        tol: float = DEFAULT_TOL) -> NormalStructureWitness:
    diam = diameter(K)
    if diam <= tol:
        return NormalStructureWitness(None, None, diam, True)
    for u in K.points:
        radius = forward_radius(u, K)
        if radius < diam - tol:
            return NormalStructureWitness(u, radius, diam, False)
    logger.debug("All %s points are forward diametral", len(K))
    return NormalStructureWitness(None, None, diam, False)


def find_forward_nondiametral(
        K: FiniteSubset,
        tol: float = DEFAULT_TOL) -> Point | None:
    return normal_structure_witness(K, tol).point


@dataclass(frozen=True)
class BoundedWitness:
    center: Point
    radius: float
    f_contained: bool
    b_contained: bool

    def to_dict(self) -> dict:
        return dict(
            center=self.center.tolist(),
            r0=self.radius,
            f_contained=self.f_contained,
            b_contained=self.b_contained)


def bounded_witness(K: FiniteSubset) -> BoundedWitness:
    """Contain ``K`` in the open f-ball and b-ball of radius
    ``Diam(K) + 1`` about its first point."""
    center = K.points[0]
    radius = diameter(K) + 1
    dist = induced_distance(K.norm, Direction.FORWARD)
    return BoundedWitness(
        center,
        radius,
        all(
            ball_contains(dist, center, radius, p, Direction.FORWARD)
            for p in K.points),
        all(
            ball_contains(dist, center, radius, p, Direction.BACKWARD)
            for p in K.points))


# INVARIANT SETS


def _successors(points: Sequence[Point], mapping: TableMap) -> list[int]:
    keys = {point_key(p): i for i, p in enumerate(points)}
    successors = []
    for p in points:
        image = point_key(mapping(p))
        if image not in keys:
            raise PointNotInTableError(
                f"Image {list(image)} of {p.tolist()} is outside the "
                "point list")
        successors.append(keys[image])
    return successors


def functional_graph(
        points: Sequence[Point],
        mapping: TableMap) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(points)))
    graph.add_edges_from(enumerate(_successors(points, mapping)))
    return graph


def minimal_invariant_sets(
        points: Iterable[PointLike] | None,
        mapping: TableMap) -> list[FiniteSubset]:
    """Cycles of the functional graph of ``T``, each in input order, listed
    by their first member."""
    pts = as_points(mapping.points if points is None else points)
    if not pts:
        raise EmptySampleError("Invariant sets need a non-empty point list")
    if len({point_key(p) for p in pts}) != len(pts):
        raise ValueError("Points must be pairwise distinct")
    cycles = sorted(
        sorted(cycle)
        for cycle in nx.simple_cycles(functional_graph(pts, mapping)))
    logger.debug("Functional graph over %s points has %s cycles",
                 len(pts), len(cycles))
    return [FiniteSubset.of(pts[i] for i in cycle) for cycle in cycles]


def periodic_points(
        points: Iterable[PointLike] | None,
        mapping: TableMap) -> list[Point]:
    """Points lying on a cycle of ``T``, in input order."""
    pts = as_points(mapping.points if points is None else points)
    graph = functional_graph(pts, mapping)
    members = sorted(i for cycle in nx.simple_cycles(graph) for i in cycle)
    return [pts[i] for i in members]


# HULLS


def _phase_one(
        A: npt.NDArray[np.float64],
        b: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Minimize the artificial sum for ``Ax = b, x >= 0`` with Bland's
    rule; returns the basic solution found."""
    rows, cols = A.shape
    sign = np.where(b < 0, -1.0, 1.0)
    tableau = np.zeros((rows + 1, cols + rows + 1))
    tableau[:rows, :cols] = A * sign[:, np.newaxis]
    tableau[:rows, cols:cols + rows] = np.eye(rows)
    tableau[:rows, -1] = b * sign
    tableau[-1, :cols] = -tableau[:rows, :cols].sum(axis=0)
    tableau[-1, -1] = -tableau[:rows, -1].sum()
    basis = list(range(cols, cols + rows))
    for _ in range(50 * (rows + cols)):
        entering = next(
            (j for j in range(cols + rows)
             if tableau[-1, j] < -PIVOT_TOL),
            None)
        if entering is None:
            break
        column = tableau[:rows, entering]
        candidates = [i for i in range(rows) if column[i] > PIVOT_TOL]
        if not candidates:
            break
        ratios = {i: tableau[i, -1] / column[i] for i in candidates}
        best = min(ratios.values())
        leaving = min(
            (i for i in candidates if ratios[i] <= best + PIVOT_TOL),
            key=lambda i: basis[i])
        tableau[leaving] /= tableau[leaving, entering]
        for i in range(rows + 1):
            if i != leaving:
                tableau[i] -= tableau[i, entering] * tableau[leaving]
        basis[leaving] = entering
    solution = np.zeros(cols)
    for i, j in enumerate(basis):
        if j < cols:
            solution[j] = max(tableau[i, -1], 0.0)
    return solution


@dataclass(frozen=True)
class HullMembership:
    member: bool
    weights: npt.NDArray[np.float64] | None
    infeasibility: float


def hull_weights(
        vertices: Iterable[PointLike],
        z: PointLike,
        tol: float = DEFAULT_TOL) -> HullMembership:
    """Decide whether ``z`` is a convex combination of ``vertices`` and
    return the combination when it is."""
    points = as_points(vertices)
    if not points:
        raise EmptySampleError("Hull membership needs at least one vertex")
    verts = np.vstack(points)
    target = as_point(z)
    if target.size != verts.shape[1]:
        raise DimensionError(
            f"Point of dimension {target.size} tested against "
            f"{verts.shape[1]}-dimensional vertices")
    if np.all(verts == verts[0]):
        raise DegenerateHullError("All hull vertices coincide")
    A = np.vstack([verts.T, np.ones(len(verts))])
    b = np.append(target, 1.0)
    weights = _phase_one(A, b)
    infeasibility = float(np.abs(A @ weights - b).sum())
    member = infeasibility <= tol
    return HullMembership(member, weights if member else None, infeasibility)


def hull_membership(
        vertices: Iterable[PointLike],
        z: PointLike,
        tol: float = DEFAULT_TOL) -> bool:
    return hull_weights(vertices, z, tol).member


@dataclass(frozen=True)
class MchReport:
    """Sample points of ``K`` outside the hull of ``T(K)``."""
    image_vertices: tuple[Point, ...]
    failures: tuple[Point, ...]
    sample_size: int

    @property
    def holds(self) -> bool:
        return not self.failures

    @property
    def witness(self) -> Point | None:
        return self.failures[0] if self.failures else None

    def to_dict(self) -> dict:
        return dict(
            holds=self.holds,
            witness=None if self.witness is None else self.witness.tolist(),
            failures=[p.tolist() for p in self.failures],
            image_vertices=[p.tolist() for p in self.image_vertices],
            sample_size=self.sample_size)


def mch_check(
        vertices: Iterable[PointLike],
        mapping: Callable[[Point], Point],
        sample: Iterable[PointLike],
        tol: float = DEFAULT_TOL) -> MchReport:
    """Test that every sample point of ``K`` lies in the hull of the
    images of its vertices."""
    verts = as_points(vertices)
    samples = as_points(sample)
    if not verts or not samples:
        raise EmptySampleError("Hull check needs vertices and a sample")
    images = [as_point(mapping(v)) for v in verts]
    check_dimension(verts[0].size, *images, *samples)
    if all(np.array_equal(images[0], p) for p in images):
        # T(K) is a single point
        failures = [
            s for s in samples if np.max(np.abs(s - images[0])) > tol]
    else:
        failures = [s for s in samples if not hull_membership(images, s, tol)]
    if failures:
        logger.warning(
            "%s of %s sample points lie outside the hull of T(K)",
            len(failures), len(samples))
    return MchReport(tuple(images), tuple(failures), len(samples))
