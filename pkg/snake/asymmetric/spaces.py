"""Points, asymmetric norms, asymmetric distances and their axioms."""

import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import Annotated, Literal, Protocol

import numpy as np
import numpy.typing as npt
from pydantic import (
    BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt,
    model_validator)

from snake.asymmetric.exceptions import (
    DimensionError, EmptySampleError, InvalidPointError,
    PointNotInTableError)

logger = logging.getLogger(__name__)

Point = npt.NDArray[np.float64]
PointLike = Sequence[float] | npt.NDArray[np.float64] | float
MetricKind = Literal["euclidean", "manhattan", "chebyshev"]

DEFAULT_TOL = 1e-9
METRIC_ORDERS: dict[str, float] = {
    "euclidean": 2,
    "manhattan": 1,
    "chebyshev": np.inf}


class Direction(StrEnum):
    FORWARD = "forward"
    BACKWARD = "backward"


def as_point(coords: PointLike) -> Point:
    """Validate coordinates and return them as a read-only vector."""
    arr = np.asarray(coords, dtype=np.float64)
    if arr.ndim > 1:
        raise InvalidPointError(
            f"Point must be a flat coordinate list, got shape {arr.shape}")
    point = np.atleast_1d(arr).copy()
    if not point.size:
        raise InvalidPointError("Point must have at least one coordinate")
    if not np.all(np.isfinite(point)):
        raise InvalidPointError(f"Point has non-finite coordinates: {point}")
    point.setflags(write=False)
    return point


def as_points(coords: Iterable[PointLike]) -> list[Point]:
    """Validate a list of points sharing one dimension."""
    points = [as_point(c) for c in coords]
    check_dimension(None, *points)
    return points


def check_dimension(dim: int | None, *points: Point) -> None:
    """Raise if the points disagree with ``dim`` or with each other."""
    sizes = {p.size for p in points}
    if dim is not None:
        sizes.add(dim)
    if len(sizes) > 1:
        raise DimensionError(
            f"Dimension mismatch: expected {dim}, "
            f"got {[p.size for p in points]}")


def point_key(point: PointLike) -> tuple[float, ...]:
    """Exact-equality key for table lookups."""
    return tuple(float(c) for c in as_point(point))


class Descriptor(BaseModel):
    """Immutable, serializable description of a space ingredient."""
    model_config = ConfigDict(frozen=True, extra="forbid")


# NORMS


class NormBase(Descriptor):
    """Asymmetric norm ``‖v|``."""

    @property
    def dim(self) -> int | None:
        return None

    def evaluate(self, v: PointLike) -> float:
        point = as_point(v)
        check_dimension(self.dim, point)
        return float(self._evaluate(point[np.newaxis, :])[0])

    def evaluate_many(
            self,
            vectors: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Evaluate the norm on every row of ``vectors``."""
        arr = np.asarray(vectors, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionError(
                f"Expected a 2-d array of vectors, got shape {arr.shape}")
        if self.dim is not None and arr.shape[1] != self.dim:
            raise DimensionError(
                f"Dimension mismatch: expected {self.dim}, "
                f"got {arr.shape[1]}")
        return self._evaluate(arr)

    def _evaluate(
            self,
            vectors: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        raise NotImplementedError


class UpperNorm(NormBase):
    """``‖x|_u = max{x, 0}`` on the line."""
    kind: Literal["upper"] = "upper"

    @property
    def dim(self) -> int:
        return 1

    def _evaluate(self, vectors):
        return np.maximum(vectors[:, 0], 0.0)


class WeightedUpperNorm(NormBase):
    """Weighted sum of coordinate positive parts."""
    kind: Literal["weighted_upper"] = "weighted_upper"
    weights: tuple[PositiveFloat, ...] = Field(min_length=1)

    @property
    def dim(self) -> int:
        return len(self.weights)

    def _evaluate(self, vectors):
        return np.maximum(vectors, 0.0) @ np.asarray(self.weights)


class PlanarMaxNorm(NormBase):
    """``‖(x, y)| = max{0, y - x, y + x}`` on the plane."""
    kind: Literal["planar_max"] = "planar_max"

    @property
    def dim(self) -> int:
        return 2

    def _evaluate(self, vectors):
        x, y = vectors[:, 0], vectors[:, 1]
        return np.maximum(np.maximum(y - x, y + x), 0.0)


class SymmetricLiftNorm(NormBase):
    """An ordinary norm viewed as an asymmetric one."""
    kind: Literal["symmetric_lift"] = "symmetric_lift"
    q: MetricKind = "euclidean"
    dimension: PositiveInt | None = None

    @property
    def dim(self) -> int | None:
        return self.dimension

    def _evaluate(self, vectors):
        return np.linalg.norm(vectors, ord=METRIC_ORDERS[self.q], axis=1)


class ScaledNorm(NormBase):
    kind: Literal["scaled"] = "scaled"
    base: "NormDescriptor"
    factor: PositiveFloat

    @property
    def dim(self) -> int | None:
        return self.base.dim

    def _evaluate(self, vectors):
        return self.factor * self.base._evaluate(vectors)


NormDescriptor = Annotated[
    UpperNorm
    | WeightedUpperNorm
    | PlanarMaxNorm
    | SymmetricLiftNorm
    | ScaledNorm,
    Field(discriminator="kind")]
ScaledNorm.model_rebuild()


# DISTANCES


class DistanceBase(Descriptor):
    """Asymmetric distance ``p(x, y)``."""

    @property
    def dim(self) -> int | None:
        return None

    def __call__(self, x: PointLike, y: PointLike) -> float:
        return self.evaluate(x, y)

    def evaluate(self, x: PointLike, y: PointLike) -> float:
        px, py = as_point(x), as_point(y)
        check_dimension(self.dim, px, py)
        return self._evaluate(px, py)

    def _evaluate(self, x: Point, y: Point) -> float:
        raise NotImplementedError


class LineOnesidedDistance(DistanceBase):
    """``y - x`` when ``y > x``, else 0."""
    kind: Literal["line_onesided"] = "line_onesided"

    @property
    def dim(self) -> int:
        return 1

    def _evaluate(self, x, y):
        return float(max(y[0] - x[0], 0.0))


class LineQuarterDistance(DistanceBase):
    """``y - x`` when ``y >= x``, else ``(x - y) / 4``."""
    kind: Literal["line_quarter"] = "line_quarter"

    @property
    def dim(self) -> int:
        return 1

    def _evaluate(self, x, y):
        if y[0] >= x[0]:
            return float(y[0] - x[0])
        return float((x[0] - y[0]) / 4)


class NormForwardDistance(DistanceBase):
    """``d(x, y) = ‖y - x|``."""
    kind: Literal["norm_forward"] = "norm_forward"
    norm: NormDescriptor

    @property
    def dim(self) -> int | None:
        return self.norm.dim

    def _evaluate(self, x, y):
        return self.norm.evaluate(y - x)


class NormBackwardDistance(DistanceBase):
    """``d(x, y) = ‖x - y|``."""
    kind: Literal["norm_backward"] = "norm_backward"
    norm: NormDescriptor

    @property
    def dim(self) -> int | None:
        return self.norm.dim

    def _evaluate(self, x, y):
        return self.norm.evaluate(x - y)


class SymmetricDistance(DistanceBase):
    kind: Literal["symmetric"] = "symmetric"
    p: MetricKind = "euclidean"
    dimension: PositiveInt | None = None

    @property
    def dim(self) -> int | None:
        return self.dimension

    def _evaluate(self, x, y):
        return float(np.linalg.norm(y - x, ord=METRIC_ORDERS[self.p]))


class FiniteTableDistance(DistanceBase):
    """Distance tabulated over a finite list of points.

    Lookups use exact coordinate equality. The table must be square with
    a zero, finite and non-negative diagonal; separation (AD2) and the
    triangle inequality are left to ``check_distance_axioms``.
    """
    kind: Literal["finite_table"] = "finite_table"
    points: tuple[tuple[float, ...], ...] = Field(min_length=1)
    values: tuple[tuple[float, ...], ...]

    @model_validator(mode="after")
    def _validate_table(self) -> "FiniteTableDistance":
        points = as_points(self.points)
        if len(set(self.points)) != len(points):
            raise ValueError("Table points must be pairwise distinct")
        size = len(points)
        if len(self.values) != size or any(
                len(row) != size for row in self.values):
            raise ValueError(f"Table values must be a {size}x{size} matrix")
        values = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("Table values must be finite and non-negative")
        if np.any(np.diag(values) != 0):
            raise ValueError("Table diagonal must be zero")
        return self

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def index(self, point: PointLike) -> int:
        key = point_key(point)
        try:
            return self.points.index(key)
        except ValueError:
            raise PointNotInTableError(
                f"Point {list(key)} is not listed in the table") from None

    def _evaluate(self, x, y):
        return float(self.values[self.index(x)][self.index(y)])


DistanceDescriptor = Annotated[
    LineOnesidedDistance
    | LineQuarterDistance
    | NormForwardDistance
    | NormBackwardDistance
    | SymmetricDistance
    | FiniteTableDistance,
    Field(discriminator="kind")]


class DistanceLike(Protocol):
    def __call__(self, x: PointLike, y: PointLike) -> float:
        ...


class NormLike(Protocol):
    def evaluate(self, v: PointLike) -> float:
        ...


def eval_distance(
        desc: DistanceLike,
        x: PointLike,
        y: PointLike) -> float:
    return desc(x, y)


def eval_norm(desc: NormLike, v: PointLike) -> float:
    return desc.evaluate(v)


def induced_distance(
        norm: NormDescriptor,
        direction: Direction = Direction.FORWARD) -> DistanceBase:
    """Forward ``‖y - x|`` or backward ``‖x - y|`` distance of a norm."""
    if Direction(direction) is Direction.FORWARD:
        return NormForwardDistance(norm=norm)
    return NormBackwardDistance(norm=norm)


def ball_contains(
        dist: DistanceLike,
        center: PointLike,
        radius: float,
        point: PointLike,
        direction: Direction = Direction.FORWARD) -> bool:
    """Membership in the open f-ball or b-ball of ``radius``."""
    if Direction(direction) is Direction.FORWARD:
        return dist(center, point) < radius
    return dist(point, center) < radius


# AXIOMS


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[Point, ...]
    excess: float
    scalar: float | None = None

    def to_dict(self) -> dict:
        data: dict = dict(
            axiom=self.axiom,
            witness=[p.tolist() for p in self.witness],
            excess=self.excess)
        if self.scalar is not None:
            data["scalar"] = self.scalar
        return data


@dataclass(frozen=True)
class AxiomReport:
    """Sample-based certificate: violations found, never a proof."""
    violations: tuple[Violation, ...]
    sample_size: int

    @property
    def consistent(self) -> bool:
        return not self.violations

    def by_axiom(self, axiom: str) -> list[Violation]:
        return [v for v in self.violations if v.axiom == axiom]

    def to_dict(self) -> dict:
        return dict(
            consistent=self.consistent,
            sample_size=self.sample_size,
            violations=[v.to_dict() for v in self.violations])


def _sample(sample: Iterable[PointLike]) -> list[Point]:
    points = as_points(sample)
    if not points:
        raise EmptySampleError("Axiom checks need a non-empty sample")
    return points


def distance_matrix(
        desc: DistanceLike,
        points: Sequence[Point]) -> npt.NDArray[np.float64]:
    """``values[i, j] = p(points[i], points[j])``."""
    return np.array(
        [[desc(x, y) for y in points] for x in points],
        dtype=np.float64)


def check_distance_axioms(
        desc: DistanceLike,
        sample: Iterable[PointLike],
        tol: float = DEFAULT_TOL) -> AxiomReport:
    """Check AD1-AD3 over all ordered pairs and triples of ``sample``."""
    points = _sample(sample)
    values = distance_matrix(desc, points)
    violations: list[Violation] = []
    for i, j in zip(*np.nonzero(values < -tol)):
        violations.append(
            Violation(
                "AD1",
                (points[i], points[j]),
                float(-values[i, j])))
    for i, j in itertools.combinations(range(len(points)), 2):
        if np.array_equal(points[i], points[j]):
            continue
        if values[i, j] <= tol and values[j, i] <= tol:
            violations.append(
                Violation(
                    "AD2",
                    (points[i], points[j]),
                    float(max(values[i, j], values[j, i]))))
    for i in range(len(points)):
        # excess[j, k] = p(x_i, x_k) - p(x_i, x_j) - p(x_j, x_k)
        excess = values[i][np.newaxis, :] - values[i][:, np.newaxis] - values
        for j, k in np.argwhere(excess > tol):
            violations.append(
                Violation(
                    "AD3",
                    (points[i], points[j], points[k]),
                    float(excess[j, k])))
    if violations:
        logger.warning(
            "Distance axioms violated %s times on %s points",
            len(violations), len(points))
    return AxiomReport(tuple(violations), len(points))


def check_norm_axioms(
        desc: NormLike,
        sample: Iterable[PointLike],
        scalars: Sequence[float] = (0.0, 0.5, 2.0),
        tol: float = DEFAULT_TOL) -> AxiomReport:
    """Check AN1-AN4 over ``sample``, its negatives and ``scalars``."""
    points = _sample(sample)
    if any(s < 0 for s in scalars):
        raise ValueError("Homogeneity scalars must be non-negative")
    values = [desc.evaluate(v) for v in points]
    violations: list[Violation] = []
    for v, value in zip(points, values):
        if value < -tol:
            violations.append(Violation("AN1", (v, ), -value))
    for v, value in zip(points, values):
        if np.max(np.abs(v)) <= tol:
            continue
        opposite = desc.evaluate(-v)
        if value <= tol and opposite <= tol:
            violations.append(
                Violation("AN2", (v, ), max(value, opposite)))
    for scalar in scalars:
        for v, value in zip(points, values):
            gap = abs(desc.evaluate(scalar * v) - scalar * value)
            if gap > tol:
                violations.append(
                    Violation("AN3", (v, ), gap, scalar=float(scalar)))
    for (u, nu), (v, nv) in itertools.product(zip(points, values), repeat=2):
        excess = desc.evaluate(u + v) - nu - nv
        if excess > tol:
            violations.append(Violation("AN4", (u, v), excess))
    if violations:
        logger.warning(
            "Norm axioms violated %s times on %s points",
            len(violations), len(points))
    return AxiomReport(tuple(violations), len(points))
