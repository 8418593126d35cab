"""Self-maps ``T: X -> X`` described declaratively."""

from collections.abc import Callable
from typing import Annotated, Literal, Protocol

import numpy as np
from numpy.polynomial import polynomial
from pydantic import Field, PositiveInt, PrivateAttr, model_validator

from snake.asymmetric.exceptions import PointNotInTableError
from snake.asymmetric.spaces import (
    Descriptor, Point, PointLike, as_point, as_points, check_dimension,
    point_key)


class SelfMap(Protocol):
    def __call__(self, x: PointLike) -> Point:
        ...


class MapBase(Descriptor):
    """A self-map; images are returned unvalidated so that solvers can
    detect overflow themselves."""

    @property
    def domain_dim(self) -> int:
        raise NotImplementedError

    def __call__(self, x: PointLike) -> Point:
        point = as_point(x)
        check_dimension(self.domain_dim, point)
        return np.asarray(self._apply(point), dtype=np.float64).reshape(-1)

    def _apply(self, x: Point) -> Point:
        raise NotImplementedError


class ScaleMap(MapBase):
    """``Tx = factor * x`` on the line."""
    kind: Literal["scale"] = "scale"
    factor: float = Field(allow_inf_nan=False)

    @property
    def domain_dim(self) -> int:
        return 1

    def _apply(self, x):
        return self.factor * x


class AffineMap(MapBase):
    """``Tx = Ax + b``."""
    kind: Literal["affine"] = "affine"
    matrix: tuple[tuple[float, ...], ...] = Field(min_length=1)
    offset: tuple[float, ...] | None = None
    _matrix: np.ndarray = PrivateAttr()
    _offset: np.ndarray = PrivateAttr()

    @model_validator(mode="after")
    def _validate_shape(self) -> "AffineMap":
        size = len(self.matrix)
        if any(len(row) != size for row in self.matrix):
            raise ValueError(f"Affine matrix must be {size}x{size}")
        if self.offset is not None and len(self.offset) != size:
            raise ValueError(f"Affine offset must have length {size}")
        matrix = np.asarray(self.matrix, dtype=np.float64)
        if not np.all(np.isfinite(matrix)):
            raise ValueError("Affine matrix must be finite")
        return self

    def model_post_init(self, context: object) -> None:
        self._matrix = np.asarray(self.matrix, dtype=np.float64)
        self._offset = (
            np.zeros(len(self.matrix))
            if self.offset is None
            else as_point(self.offset))

    @property
    def domain_dim(self) -> int:
        return len(self.matrix)

    def _apply(self, x):
        return self._matrix @ x + self._offset


class ScalarPolyMap(MapBase):
    """Polynomial on the line, coefficients in ascending powers."""
    kind: Literal["scalar_poly"] = "scalar_poly"
    coefficients: tuple[float, ...] = Field(min_length=1)

    @property
    def domain_dim(self) -> int:
        return 1

    def _apply(self, x):
        return polynomial.polyval(x, self.coefficients)


class TableMap(MapBase):
    """Map tabulated over a finite point list; lookups are exact."""
    kind: Literal["finite_table"] = "finite_table"
    points: tuple[tuple[float, ...], ...] = Field(min_length=1)
    images: tuple[tuple[float, ...], ...]

    @model_validator(mode="after")
    def _validate_table(self) -> "TableMap":
        as_points(self.points + self.images)
        if len(set(self.points)) != len(self.points):
            raise ValueError("Table points must be pairwise distinct")
        if len(self.images) != len(self.points):
            raise ValueError("Table needs exactly one image per point")
        return self

    @property
    def domain_dim(self) -> int:
        return len(self.points[0])

    def index(self, point: PointLike) -> int:
        key = point_key(point)
        try:
            return self.points.index(key)
        except ValueError:
            raise PointNotInTableError(
                f"Point {list(key)} is not listed in the table") from None

    def successors(self) -> list[int]:
        """Index of the image of every point; raises when ``T`` leaves
        the point list."""
        return [self.index(image) for image in self.images]

    def _apply(self, x):
        return np.asarray(self.images[self.index(x)], dtype=np.float64)


class PowerMap(MapBase):
    """The ``k``-fold composition ``T^k``."""
    kind: Literal["power"] = "power"
    base: "MapDescriptor"
    k: PositiveInt

    @property
    def domain_dim(self) -> int:
        return self.base.domain_dim

    def _apply(self, x):
        for _ in range(self.k):
            x = np.asarray(self.base._apply(x), dtype=np.float64).reshape(-1)
        return x


MapDescriptor = Annotated[
    ScaleMap
    | AffineMap
    | ScalarPolyMap
    | TableMap
    | PowerMap,
    Field(discriminator="kind")]
PowerMap.model_rebuild()


def compose_power(
        mapping: Callable[[Point], Point],
        k: int) -> Callable[[Point], Point]:
    """``T^k`` for any callable; ``k == 1`` returns ``T`` itself."""
    if k < 1:
        raise ValueError(f"Power must be a positive integer, got {k}")
    if k == 1:
        return mapping

    def power(x: Point) -> Point:
        for _ in range(k):
            x = mapping(x)
        return x
    return power
