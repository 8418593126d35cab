"""Sequence diagnostics and Lipschitz f/b classification of maps."""

import itertools
import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from pydantic import (
    ConfigDict, NonNegativeInt, PositiveInt, BaseModel, model_validator)

from snake.asymmetric.exceptions import DimensionError, EmptySampleError
from snake.asymmetric.maps import TableMap
from snake.asymmetric.spaces import (
    DEFAULT_TOL, Direction, DistanceLike, Point, PointLike, as_point,
    as_points, check_dimension, distance_matrix)

logger = logging.getLogger(__name__)

Pair = tuple[Point, Point]
Mapping = Callable[[Point], Point]


class FlagStatus(StrEnum):
    HOLDS = "holds_on_sample"
    VIOLATED = "violated"
    UNDETERMINED = "undetermined"


class Verdict(StrEnum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    UNDETERMINED = "undetermined"


def _pair_dict(pair: Pair | None) -> list[list[float]] | None:
    return None if pair is None else [p.tolist() for p in pair]


@dataclass(frozen=True)
class Flag:
    status: FlagStatus
    witness: Pair | None = None
    ratio: float | None = None
    extrapolated: bool = False

    def to_dict(self) -> dict:
        return dict(
            status=str(self.status),
            witness=_pair_dict(self.witness),
            ratio=self.ratio,
            extrapolated=self.extrapolated)


@dataclass(frozen=True)
class LipschitzReport:
    """Sup-estimates of the Lipschitz f/b constants over sampled pairs.

    Estimates are lower bounds of the true constants and never claim
    attainment.
    """
    k_f_estimate: float
    l_b_estimate: float
    witness_pair_f: Pair | None
    witness_pair_b: Pair | None
    f_contraction: Flag
    b_contraction: Flag
    f_nonexpansive: Flag
    b_nonexpansive: Flag
    f_shrinkage: Flag
    b_shrinkage: Flag
    pair_count: int

    @property
    def flags(self) -> dict[str, Flag]:
        return dict(
            f_contraction=self.f_contraction,
            b_contraction=self.b_contraction,
            f_nonexpansive=self.f_nonexpansive,
            b_nonexpansive=self.b_nonexpansive,
            f_shrinkage=self.f_shrinkage,
            b_shrinkage=self.b_shrinkage)

    def to_dict(self) -> dict:
        return dict(
            k_f_estimate=self.k_f_estimate,
            l_b_estimate=self.l_b_estimate,
            witness_pair_f=_pair_dict(self.witness_pair_f),
            witness_pair_b=_pair_dict(self.witness_pair_b),
            pair_count=self.pair_count,
            flags={k: v.to_dict() for k, v in self.flags.items()})


class _RatioScan:
    """Running sup of ``d(Tx, Ty) / denominator`` over pairs."""

    def __init__(self) -> None:
        self.estimate = 0.0
        self.witness: Pair | None = None
        self.counted = 0
        self.shrink_witness: Pair | None = None
        self.shrink_ratio: float | None = None

    def add(self, pair: Pair, numerator: float, denominator: float) -> None:
        if denominator == 0:
            if numerator == 0:
                ratio = None
            else:
                ratio = float("inf")
        else:
            ratio = numerator / denominator
        if self.shrink_witness is None and not numerator < denominator:
            self.shrink_witness = pair
            self.shrink_ratio = ratio
        if ratio is None:
            return
        self.counted += 1
        if self.witness is None or ratio > self.estimate:
            self.estimate = ratio
            self.witness = pair

    def bound_flag(self, limit: float, strict: bool) -> Flag:
        if not self.counted:
            return Flag(FlagStatus.UNDETERMINED)
        holds = (
            self.estimate < limit
            if strict
            else self.estimate <= limit)
        if holds:
            return Flag(FlagStatus.HOLDS, ratio=self.estimate)
        return Flag(FlagStatus.VIOLATED, self.witness, self.estimate)

    def shrinkage_flag(self) -> Flag:
        if self.shrink_witness is None:
            return Flag(FlagStatus.HOLDS)
        return Flag(
            FlagStatus.VIOLATED,
            self.shrink_witness,
            self.shrink_ratio)


def _report(
        dist: DistanceLike,
        pairs: Iterable[tuple[Pair, Pair]]) -> LipschitzReport:
    forward, backward = _RatioScan(), _RatioScan()
    count = 0
    for (x, y), (tx, ty) in pairs:
        count += 1
        numerator = dist(tx, ty)
        forward.add((x, y), numerator, dist(x, y))
        backward.add((x, y), numerator, dist(y, x))
    if not count:
        raise EmptySampleError("Lipschitz estimation needs at least one pair")
    logger.debug(
        "Lipschitz scan over %s pairs: k_f=%s l_b=%s",
        count, forward.estimate, backward.estimate)
    return LipschitzReport(
        k_f_estimate=forward.estimate,
        l_b_estimate=backward.estimate,
        witness_pair_f=forward.witness,
        witness_pair_b=backward.witness,
        f_contraction=forward.bound_flag(1.0, strict=True),
        b_contraction=backward.bound_flag(1.0, strict=True),
        f_nonexpansive=forward.bound_flag(1.0, strict=False),
        b_nonexpansive=backward.bound_flag(1.0, strict=False),
        f_shrinkage=forward.shrinkage_flag(),
        b_shrinkage=backward.shrinkage_flag(),
        pair_count=count)


def estimate_lipschitz(
        mapping: Mapping,
        dist: DistanceLike,
        pairs: Iterable[tuple[PointLike, PointLike]]) -> LipschitzReport:
    """Estimate ``k_f`` and ``l_b`` as sups of ``d(Tx,Ty)/d(x,y)`` and
    ``d(Tx,Ty)/d(y,x)``.

    Zero denominators with zero numerators are skipped, with positive
    numerators they make the estimate infinite.
    """
    checked: list[Pair] = []
    for x, y in pairs:
        px, py = as_point(x), as_point(y)
        if np.array_equal(px, py):
            raise ValueError(
                f"Lipschitz pairs must be distinct, got {px.tolist()} twice")
        checked.append((px, py))
    return _report(
        dist,
        (((x, y), (mapping(x), mapping(y))) for x, y in checked))


class SamplerConfig(BaseModel):
    """Uniform grid over a box plus seeded pseudo-random pairs."""
    model_config = ConfigDict(frozen=True, extra="forbid")
    lower: float | tuple[float, ...] = -1.0
    upper: float | tuple[float, ...] = 1.0
    density: PositiveInt = 21
    random_pairs: NonNegativeInt = 200
    seed: int = 0

    @model_validator(mode="after")
    def _validate_box(self) -> "SamplerConfig":
        lower, upper = np.asarray(self.lower), np.asarray(self.upper)
        if lower.shape and upper.shape and lower.shape != upper.shape:
            raise ValueError("Sampler bounds must have matching lengths")
        if np.any(lower > upper):
            raise ValueError("Sampler lower bound exceeds upper bound")
        return self

    def bounds(self, dim: int) -> tuple[Point, Point]:
        return self._axis(self.lower, dim), self._axis(self.upper, dim)

    def grid(self, dim: int) -> list[Point]:
        lower, upper = self.bounds(dim)
        axes = [
            np.unique(np.linspace(lo, hi, self.density))
            for lo, hi in zip(lower, upper)]
        return [as_point(coords) for coords in itertools.product(*axes)]

    def random(self, dim: int) -> list[Pair]:
        lower, upper = self.bounds(dim)
        rng = np.random.default_rng(self.seed)
        xs = rng.uniform(lower, upper, size=(self.random_pairs, dim))
        ys = rng.uniform(lower, upper, size=(self.random_pairs, dim))
        return [
            (as_point(x), as_point(y))
            for x, y in zip(xs, ys)
            if not np.array_equal(x, y)]

    def _axis(self, bound: float | tuple[float, ...], dim: int) -> Point:
        arr = np.asarray(bound, dtype=np.float64)
        if not arr.ndim:
            return as_point(np.full(dim, float(arr)))
        if arr.shape != (dim, ):
            raise DimensionError(
                f"Sampler bounds do not match dimension {dim}")
        return as_point(arr)


def domain_dim(mapping: Mapping, dist: DistanceLike) -> int:
    dims = {
        d for d in (
            getattr(mapping, "domain_dim", None),
            getattr(dist, "dim", None))
        if d is not None}
    if len(dims) != 1:
        raise DimensionError(
            f"Cannot infer a single domain dimension from {sorted(dims)}")
    return dims.pop()


def classify_map(
        mapping: Mapping,
        dist: DistanceLike,
        sampler: SamplerConfig | None = None) -> LipschitzReport:
    """Classify ``T`` with the standard sampling policy.

    Tabulated maps are scanned exhaustively over all ordered pairs, so
    their estimates are the true constants.
    """
    sampler = sampler or SamplerConfig()
    if isinstance(mapping, TableMap):
        points = as_points(mapping.points)
        images = {i: mapping(p) for i, p in enumerate(points)}
        return _report(
            dist,
            (((points[i], points[j]), (images[i], images[j]))
             for i, j in itertools.permutations(range(len(points)), 2)))
    dim = domain_dim(mapping, dist)
    grid = sampler.grid(dim)
    images = [mapping(p) for p in grid]
    pairs = [
        ((grid[i], grid[j]), (images[i], images[j]))
        for i, j in itertools.permutations(range(len(grid)), 2)]
    pairs.extend(
        ((x, y), (mapping(x), mapping(y)))
        for x, y in sampler.random(dim))
    if not pairs:
        raise EmptySampleError("Sampler produced no pairs")
    return _report(dist, pairs)


@dataclass(frozen=True)
class RefinementReport:
    """Lipschitz estimates over nested grids, extrapolated to zero mesh."""
    densities: tuple[int, ...]
    reports: tuple[LipschitzReport, ...]
    k_f_limit: float
    l_b_limit: float
    f_contraction: Flag
    b_contraction: Flag

    def to_dict(self) -> dict:
        return dict(
            levels=[
                dict(
                    density=density,
                    k_f_estimate=report.k_f_estimate,
                    l_b_estimate=report.l_b_estimate)
                for density, report in zip(self.densities, self.reports)],
            k_f_limit=self.k_f_limit,
            l_b_limit=self.l_b_limit,
            f_contraction=self.f_contraction.to_dict(),
            b_contraction=self.b_contraction.to_dict())


def _extrapolate(coarse: float, fine: float) -> float:
    # linear in the mesh width; the observed sup is always a lower bound
    if not np.isfinite(fine) or not np.isfinite(coarse):
        return fine
    return max(fine, 2 * fine - coarse)


def _refined_flag(
        limit: float,
        finest: Flag,
        witness: Pair | None,
        measured: float,
        tol: float) -> Flag:
    """Violated when the extrapolated constant reaches 1 while no sampled
    pair does; such a flag carries the ratio measured at ``witness`` and
    is marked ``extrapolated``."""
    if finest.status is FlagStatus.VIOLATED:
        return finest
    if limit >= 1 - tol:
        return Flag(FlagStatus.VIOLATED, witness, measured, extrapolated=True)
    return finest


def refine_classification(
        mapping: Mapping,
        dist: DistanceLike,
        sampler: SamplerConfig | None = None,
        levels: int = 3,
        tol: float = DEFAULT_TOL) -> RefinementReport:
    """Repeat the grid classification with nested grids of doubled
    density and report contraction as violated when the extrapolated
    constant reaches 1."""
    sampler = sampler or SamplerConfig()
    if levels < 2:
        raise ValueError("Refinement needs at least two levels")
    if sampler.density < 2:
        raise ValueError("Refinement needs a grid density of at least 2")
    densities: list[int] = []
    reports: list[LipschitzReport] = []
    density = sampler.density
    for _ in range(levels):
        densities.append(density)
        reports.append(
            classify_map(
                mapping,
                dist,
                sampler.model_copy(
                    update=dict(density=density, random_pairs=0))))
        density = 2 * (density - 1) + 1
    coarse, finest = reports[-2], reports[-1]
    k_f_limit = _extrapolate(coarse.k_f_estimate, finest.k_f_estimate)
    l_b_limit = _extrapolate(coarse.l_b_estimate, finest.l_b_estimate)
    logger.info(
        "Refined classification over densities %s: k_f -> %s, l_b -> %s",
        densities, k_f_limit, l_b_limit)
    return RefinementReport(
        densities=tuple(densities),
        reports=tuple(reports),
        k_f_limit=k_f_limit,
        l_b_limit=l_b_limit,
        f_contraction=_refined_flag(
            k_f_limit, finest.f_contraction, finest.witness_pair_f,
            finest.k_f_estimate, tol),
        b_contraction=_refined_flag(
            l_b_limit, finest.b_contraction, finest.witness_pair_b,
            finest.l_b_estimate, tol))


# SEQUENCES


def convergence_residuals(
        seq: Sequence[PointLike],
        limit: PointLike,
        dist: DistanceLike,
        direction: Direction = Direction.FORWARD) -> list[float]:
    """``p(limit, x_n)`` (forward) or ``p(x_n, limit)`` (backward)."""
    points = as_points(seq)
    target = as_point(limit)
    check_dimension(None, target, *points)
    if Direction(direction) is Direction.FORWARD:
        return [dist(target, x) for x in points]
    return [dist(x, target) for x in points]


@dataclass(frozen=True)
class CauchyCheck:
    direction: Direction
    passed: bool
    threshold: int
    witness: tuple[int, int] | None = None
    distance: float | None = None

    def to_dict(self) -> dict:
        return dict(
            direction=str(self.direction),
            passed=self.passed,
            threshold=self.threshold,
            witness=None if self.witness is None else list(self.witness),
            distance=self.distance)


def cauchy_prefix(
        seq: Sequence[PointLike],
        dist: DistanceLike,
        eps: float,
        direction: Direction = Direction.FORWARD) -> CauchyCheck:
    """Search the smallest ``N`` with ``p(x_n, x_m) < eps`` (forward) or
    ``p(x_m, x_n) < eps`` (backward) for all ``m >= n >= N``.

    The prefix passes when ``N <= len(seq) // 2``; otherwise the first
    violating pair ``(n, m)`` with ``n >= len(seq) // 2`` is returned.
    """
    if eps <= 0:
        raise ValueError(f"Cauchy tolerance must be positive, got {eps}")
    points = as_points(seq)
    if len(points) < 2:
        raise EmptySampleError("Cauchy check needs at least two points")
    direction = Direction(direction)
    values = distance_matrix(dist, points)
    entries = values if direction is Direction.FORWARD else values.T
    bad = np.triu(entries >= eps)
    bad_rows = np.nonzero(bad.any(axis=1))[0]
    threshold = int(bad_rows[-1]) + 1 if bad_rows.size else 0
    half = len(points) // 2
    if threshold <= half:
        return CauchyCheck(direction, True, threshold)
    n, m = (int(i) for i in np.argwhere(bad[half:])[0])
    n += half
    return CauchyCheck(
        direction, False, threshold, (n, m), float(entries[n, m]))


def is_f_cauchy_prefix(
        seq: Sequence[PointLike],
        dist: DistanceLike,
        eps: float) -> CauchyCheck:
    return cauchy_prefix(seq, dist, eps, Direction.FORWARD)


def is_b_cauchy_prefix(
        seq: Sequence[PointLike],
        dist: DistanceLike,
        eps: float) -> CauchyCheck:
    return cauchy_prefix(seq, dist, eps, Direction.BACKWARD)


@dataclass(frozen=True)
class SubsequenceCheck:
    verdict: Verdict
    threshold: int | None = None
    witness: int | None = None
    residual: float | None = None
    reason: str = ""

    def to_dict(self) -> dict:
        return dict(
            verdict=str(self.verdict),
            threshold=self.threshold,
            witness=self.witness,
            residual=self.residual,
            reason=self.reason)


def verify_prop_k12(
        seq: Sequence[PointLike],
        subseq_indices: Sequence[int],
        limit: PointLike,
        dist: DistanceLike,
        eps: float) -> SubsequenceCheck:
    """A b-Cauchy sequence with an f-convergent subsequence f-converges.

    Checked on the prefix: once the sequence is b-Cauchy at ``eps / 2``
    from ``N`` and the subsequence residuals ``p(limit, x_{n_k})`` stay
    below ``eps / 2``, every ``n`` in ``[N, n_last]`` must satisfy
    ``p(limit, x_n) < eps``.
    """
    points = as_points(seq)
    target = as_point(limit)
    check_dimension(None, target, *points)
    indices = [int(i) for i in subseq_indices]
    if not indices:
        raise EmptySampleError("Subsequence indices must not be empty")
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ValueError("Subsequence indices must be strictly increasing")
    if indices[0] < 0 or indices[-1] >= len(points):
        raise ValueError("Subsequence indices out of range")
    cauchy = is_b_cauchy_prefix(points, dist, eps / 2)
    if not cauchy.passed:
        return SubsequenceCheck(
            Verdict.UNDETERMINED,
            reason="sequence is not b-Cauchy on the prefix")
    residuals = [dist(target, points[i]) for i in indices]
    tail = len(residuals)
    while tail and residuals[tail - 1] < eps / 2:
        tail -= 1
    if tail == len(residuals):
        return SubsequenceCheck(
            Verdict.UNDETERMINED,
            reason="subsequence does not f-converge on the prefix")
    start, stop = cauchy.threshold, indices[-1]
    if start > stop:
        return SubsequenceCheck(
            Verdict.UNDETERMINED,
            reason="no index lies past the combined threshold")
    for n in range(start, stop + 1):
        residual = dist(target, points[n])
        if residual >= eps:
            logger.warning(
                "Subsequence check inconsistent at n=%s (residual %s)",
                n, residual)
            return SubsequenceCheck(
                Verdict.INCONSISTENT, start, n, residual)
    return SubsequenceCheck(Verdict.CONSISTENT, start)


@dataclass(frozen=True)
class TailCheck:
    """Forward and backward residuals of an orbit tail to its endpoint."""
    forward: tuple[float, ...]
    backward: tuple[float, ...]
    holds: bool

    def to_dict(self) -> dict:
        return dict(
            forward=list(self.forward),
            backward=list(self.backward),
            holds=self.holds)


def convergence_tail_check(
        orbit: Sequence[Point],
        limit: PointLike,
        dist: DistanceLike,
        tol: float = DEFAULT_TOL) -> TailCheck:
    """Evidence that f-convergence comes with b-convergence.

    The tail is the last quarter (at least two points) of the orbit
    before it reaches ``limit``; a final orbit point equal to ``limit``
    is left out. Its backward residuals ``d(x_n, limit)`` must not grow
    by more than ``tol`` from one point to the next and must end below
    where they started, or within ``tol``. A tail of fewer than two
    points holds.
    """
    if not orbit:
        raise EmptySampleError("Tail check needs a non-empty orbit")
    target = as_point(limit)
    points = list(orbit)
    if np.array_equal(as_point(points[-1]), target):
        points.pop()
    tail = points[-max(2, len(points) // 4):]
    forward = tuple(dist(target, x) for x in tail)
    backward = tuple(dist(x, target) for x in tail)
    if len(backward) < 2:
        return TailCheck(forward, backward, True)
    monotone = all(
        later <= earlier + tol
        for earlier, later in itertools.pairwise(backward))
    decays = backward[-1] <= tol or backward[-1] < backward[0]
    holds = monotone and decays
    if not holds:
        logger.warning(
            "Backward residuals of the orbit tail do not decay: %s",
            backward)
    return TailCheck(forward, backward, holds)
