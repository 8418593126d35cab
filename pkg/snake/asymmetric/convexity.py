"""Convex combinations approximating a point, and the Minkowski functional
of a polytope."""

import itertools
import logging
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from snake.asymmetric.exceptions import EmptySampleError, RayEscapesError
from snake.asymmetric.geometry import hull_membership
from snake.asymmetric.spaces import (
    DEFAULT_TOL, NormBase, Point, PointLike, as_point, as_points,
    check_dimension)

logger = logging.getLogger(__name__)

WEIGHT_TOL = 1e-12
DESCENT_TOL = 1e-12
MAX_SWEEPS = 100
LINE_STEPS = 60
GRID_CHUNK = 1 << 16
MEMBERSHIP_TOL = 1e-12
MAX_SCALE = 1e6


@dataclass(frozen=True)
class SimplexWeights:
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.weights:
            raise ValueError("Simplex weights must not be empty")
        if any(w < 0 for w in self.weights):
            raise ValueError(f"Simplex weights must be non-negative: "
                             f"{self.weights}")
        if abs(sum(self.weights) - 1) > WEIGHT_TOL:
            raise ValueError(
                f"Simplex weights must sum to 1, got {sum(self.weights)}")

    @classmethod
    def of(cls, weights: npt.ArrayLike) -> "SimplexWeights":
        return cls(tuple(float(w) for w in np.asarray(weights).reshape(-1)))

    def __len__(self) -> int:
        return len(self.weights)

    def as_array(self) -> npt.NDArray[np.float64]:
        return np.asarray(self.weights, dtype=np.float64)


def simplex_grid(size: int, q: int) -> Iterator[npt.NDArray[np.int64]]:
    """All compositions of ``q`` into ``size`` non-negative parts, in
    chunks of rows."""
    combos = itertools.combinations(range(q + size - 1), size - 1)
    while chunk := list(itertools.islice(combos, GRID_CHUNK)):
        rows = len(chunk)
        bars = np.array(chunk, dtype=np.int64).reshape(rows, size - 1)
        edges = np.hstack([
            np.full((rows, 1), -1, dtype=np.int64),
            bars,
            np.full((rows, 1), q + size - 1, dtype=np.int64)])
        yield np.diff(edges, axis=1) - 1


def _lex_largest(rows: npt.NDArray[np.int64]) -> npt.NDArray[np.int64]:
    # lexsort treats its last key as primary
    return rows[np.lexsort(rows.T[::-1])[-1]]


def _transfer(
        weights: npt.NDArray[np.float64],
        source: int,
        target: int,
        amount: float) -> npt.NDArray[np.float64]:
    moved = weights.copy()
    moved[source] -= amount
    moved[target] += amount
    return moved


def _line_minimize(phi: Callable[[float], float], hi: float) -> float:
    """Dichotomous search for a minimizer of a convex ``phi`` on
    ``[0, hi]``."""
    lo, top = 0.0, hi
    for _ in range(LINE_STEPS):
        mid = (lo + top) / 2
        delta = (top - lo) * 1e-3
        if phi(mid - delta) <= phi(mid + delta):
            top = mid + delta
        else:
            lo = mid - delta
    return min((0.0, hi, (lo + top) / 2), key=phi)


def _pair_descent(
        objective: Callable[[npt.NDArray[np.float64]], float],
        weights: npt.NDArray[np.float64],
        value: float) -> tuple[npt.NDArray[np.float64], float]:
    """Move mass between coordinate pairs while it lowers the objective."""
    for sweep in range(MAX_SWEEPS):
        start = value
        for i, j in itertools.permutations(range(len(weights)), 2):
            if weights[i] <= 0:
                continue
            current = weights
            amount = _line_minimize(
                lambda t: objective(_transfer(current, i, j, t)),
                float(current[i]))
            trial = objective(_transfer(current, i, j, amount))
            if trial < value:
                weights, value = _transfer(current, i, j, amount), trial
        logger.debug("Descent sweep %s: %s -> %s", sweep, start, value)
        if start - value < DESCENT_TOL:
            break
    return weights, value


@dataclass(frozen=True, eq=False)
class MazurResult:
    """Best convex combination found; ``found`` tells whether it is an
    ``eps``-approximant."""
    found: bool
    weights: SimplexWeights
    point: Point
    achieved: float
    eps: float

    def to_dict(self) -> dict:
        return dict(
            found=self.found,
            weights=list(self.weights.weights),
            point=self.point.tolist(),
            achieved=self.achieved,
            eps=self.eps)


def mazur_approximation(
        seq_prefix: Iterable[PointLike],
        x0: PointLike,
        norm: NormBase,
        eps: float,
        grid_q: int = 20) -> MazurResult:
    """Minimize ``‖x0 - sum a_j x_j|`` over the weight simplex.

    The rational grid with step ``1 / grid_q`` is searched exhaustively,
    earlier sequence elements winning ties, and the grid optimum is then
    improved by pairwise mass transfers.
    """
    points = as_points(seq_prefix)
    if not points:
        raise EmptySampleError("Mazur approximation needs a sequence prefix")
    target = as_point(x0)
    check_dimension(norm.dim, target, *points)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if grid_q < 1:
        raise ValueError(f"grid_q must be at least 1, got {grid_q}")
    X = np.vstack(points)

    best = float("inf")
    best_counts: npt.NDArray[np.int64] | None = None
    for counts in simplex_grid(len(points), grid_q):
        values = norm.evaluate_many(target - (counts / grid_q) @ X)
        low = float(values.min())
        if low > best:
            continue
        candidate = _lex_largest(counts[values == low])
        if (best_counts is None
                or low < best
                or tuple(candidate) > tuple(best_counts)):
            best, best_counts = low, candidate
    assert best_counts is not None
    logger.debug("Grid optimum %s at %s/%s", best, best_counts, grid_q)

    weights, achieved = _pair_descent(
        lambda w: norm.evaluate(target - w @ X),
        best_counts / grid_q,
        best)
    weights = weights / weights.sum()
    found = achieved <= eps
    if not found:
        logger.warning(
            "No %s-approximant at grid resolution %s (best %s)",
            eps, grid_q, achieved)
    return MazurResult(
        found, SimplexWeights.of(weights), weights @ X, achieved, eps)


def minkowski_functional(
        vertices: Iterable[PointLike],
        z: PointLike,
        tol: float = DEFAULT_TOL) -> float:
    """``inf{t > 0 : z in t M}`` for ``M`` the hull of ``vertices``, by
    bisection on ``t``."""
    points = as_points(vertices)
    if not points:
        raise EmptySampleError("Minkowski functional needs vertices")
    verts = np.vstack(points)
    target = as_point(z)
    check_dimension(verts.shape[1], target)
    if not np.any(target):
        raise ValueError("Minkowski functional needs a non-zero point")

    def contains(scale: float) -> bool:
        return hull_membership(scale * verts, target, MEMBERSHIP_TOL)

    hi = 1.0
    while not contains(hi):
        hi *= 2
        if hi > MAX_SCALE:
            raise RayEscapesError(
                f"Ray through {target.tolist()} escapes M")
    lo = 0.0
    for _ in range(LINE_STEPS):
        if hi - lo <= tol * 1e-9:
            break
        mid = (lo + hi) / 2
        if contains(mid):
            hi = mid
        else:
            lo = mid
    logger.debug("Minkowski functional of %s: %s", target.tolist(), hi)
    return hi
