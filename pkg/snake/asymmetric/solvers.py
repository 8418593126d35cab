"""Fixed-point iterations in asymmetric spaces and checks of what the
classical theorems promise about them."""

import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field, replace
from enum import StrEnum
from typing import Annotated, Literal

import numpy as np
from pydantic import (
    BaseModel, ConfigDict, Field, NonNegativeFloat, PositiveFloat,
    PositiveInt)

from snake.asymmetric.analysis import Verdict, convergence_tail_check
from snake.asymmetric.exceptions import EmptySampleError, InvalidPointError
from snake.asymmetric.geometry import FiniteSubset, diameter
from snake.asymmetric.maps import compose_power
from snake.asymmetric.spaces import (
    Descriptor, Direction, DistanceLike, NormBase, Point, PointLike,
    as_point, as_points, check_dimension, induced_distance)

logger = logging.getLogger(__name__)

Mapping = Callable[[Point], Point]

DIVERGENCE_BOUND = 1e12
RATE_CHECK_LIMIT = 256
DEFAULT_SLACK = 0.05
DEFAULT_GK_THRESHOLD = 0.1


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    tol: PositiveFloat = 1e-10
    max_iter: PositiveInt = 10000
    record_trace: bool = False


class Status(StrEnum):
    CONVERGED = "converged"
    MAX_ITER_EXCEEDED = "max_iter_exceeded"
    DIVERGED = "diverged"


@dataclass(frozen=True)
class TraceRow:
    n: int
    point: Point
    d_fwd_step: float
    d_bwd_step: float
    bound: float | None = None


@dataclass(frozen=True)
class ConvergenceTrace:
    """One row per update ``x_n -> x_{n+1}``."""
    rows: tuple[TraceRow, ...]

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True, eq=False)
class FixedPointResult:
    status: Status
    point: Point
    iterations: int
    forward_residual: float
    backward_residual: float
    trace: ConvergenceTrace | None = None
    bound_respected: bool | None = None
    orbit: tuple[Point, ...] = ()
    diagnostics: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def to_dict(self) -> dict:
        return dict(
            status=str(self.status),
            point=self.point.tolist(),
            iterations=self.iterations,
            forward_residual=self.forward_residual,
            backward_residual=self.backward_residual,
            bound_respected=self.bound_respected,
            diagnostics=self.diagnostics)


def _apply(mapping: Mapping, x: Point) -> Point | None:
    """``Tx`` as a read-only vector, or ``None`` once the orbit escapes."""
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            image = np.array(mapping(x), dtype=np.float64).reshape(-1)
    except (InvalidPointError, OverflowError, FloatingPointError):
        return None
    if (image.size != x.size
            or not np.all(np.isfinite(image))
            or np.max(np.abs(image)) > DIVERGENCE_BOUND):
        return None
    image.setflags(write=False)
    return image


def _residuals(
        mapping: Mapping,
        dist: DistanceLike,
        x: Point) -> tuple[float, float]:
    image = _apply(mapping, x)
    if image is None:
        return float("inf"), float("inf")
    return dist(x, image), dist(image, x)


def _check_contraction(contraction: float | None) -> None:
    if contraction is not None and not 0 <= contraction < 1:
        raise ValueError(
            f"Contraction constant must lie in [0, 1), got {contraction}")


@dataclass(frozen=True)
class RateCheck:
    """``d(x_n, x_m) <= lam * k^m / (1 - k)`` over orbit pairs ``m <= n``."""
    respected: bool
    pairs: int
    witness: tuple[int, int] | None = None
    observed: float | None = None
    bound: float | None = None

    def to_dict(self) -> dict:
        return dict(
            respected=self.respected,
            pairs=self.pairs,
            witness=None if self.witness is None else list(self.witness),
            observed=self.observed,
            bound=self.bound)


def check_rate_bound(
        orbit: Sequence[PointLike],
        dist: DistanceLike,
        lam: float,
        k: float,
        slack: float = 0.0) -> RateCheck:
    _check_contraction(k)
    points = as_points(orbit)
    pairs = 0
    for n, later in enumerate(points):
        for m in range(n + 1):
            pairs += 1
            bound = lam * k**m / (1 - k)
            observed = dist(later, points[m])
            if observed > bound + slack:
                logger.warning(
                    "Rate bound violated at (m, n)=(%s, %s): %s > %s",
                    m, n, observed, bound)
                return RateCheck(False, pairs, (m, n), observed, bound)
    return RateCheck(True, pairs)


def _iterate(
        mapping: Mapping,
        dist: DistanceLike,
        x0: PointLike,
        cfg: SolverConfig,
        contraction: float | None = None,
        accept: Callable[[Point], bool] | None = None) -> FixedPointResult:
    x = as_point(x0)
    orbit = [x]
    rows: list[TraceRow] = []
    lam: float | None = None
    status = Status.MAX_ITER_EXCEEDED
    fwd = bwd = float("inf")
    for n in range(cfg.max_iter + 1):
        image = _apply(mapping, x)
        if image is None:
            status = Status.DIVERGED
            break
        fwd, bwd = dist(x, image), dist(image, x)
        if n == 0 and contraction is not None:
            lam = max(fwd, bwd)
        if fwd <= cfg.tol and bwd <= cfg.tol and (
                accept is None or accept(x)):
            status = Status.CONVERGED
            break
        if n == cfg.max_iter:
            break
        if cfg.record_trace:
            bound = (
                None
                if lam is None or contraction is None
                else lam * contraction**n / (1 - contraction))
            rows.append(TraceRow(n, x, fwd, bwd, bound))
        logger.debug("Iteration %s: d(x,Tx)=%s d(Tx,x)=%s", n, fwd, bwd)
        x = image
        orbit.append(x)
    iterations = len(orbit) - 1
    if status is Status.DIVERGED:
        fwd = bwd = float("inf")
        logger.warning("Orbit diverged after %s iterations", iterations)
    elif status is Status.MAX_ITER_EXCEEDED:
        logger.warning(
            "No fixed point after %s iterations (residuals %s, %s)",
            iterations, fwd, bwd)
    else:
        logger.info("Converged after %s iterations", iterations)
    diagnostics: dict = dict(
        convergence_tail=convergence_tail_check(
            orbit, x, dist, cfg.tol).to_dict())
    bound_respected = None
    if contraction is not None and lam is not None:
        rate = check_rate_bound(
            orbit[:RATE_CHECK_LIMIT], dist, lam, contraction, cfg.tol)
        bound_respected = rate.respected
        diagnostics.update(
            contraction=contraction, lam=lam, rate_check=rate.to_dict())
    return FixedPointResult(
        status=status,
        point=x,
        iterations=iterations,
        forward_residual=fwd,
        backward_residual=bwd,
        trace=ConvergenceTrace(tuple(rows)) if cfg.record_trace else None,
        bound_respected=bound_respected,
        orbit=tuple(orbit),
        diagnostics=diagnostics)


def picard(
        mapping: Mapping,
        dist: DistanceLike,
        x0: PointLike,
        cfg: SolverConfig | None = None,
        contraction: float | None = None) -> FixedPointResult:
    """Iterate ``x_{n+1} = T x_n`` until both ``d(x, Tx)`` and ``d(Tx, x)``
    are within tolerance.

    With a contraction constant ``k``, trace rows carry the a-priori bound
    ``lam * k^n / (1 - k)`` where ``lam = max{d(x_1, x_0), d(x_0, x_1)}``
    and the orbit is checked against it.
    """
    _check_contraction(contraction)
    return _iterate(mapping, dist, x0, cfg or SolverConfig(), contraction)


def power_picard(
        mapping: Mapping,
        dist: DistanceLike,
        k: int,
        x0: PointLike,
        cfg: SolverConfig | None = None,
        contraction: float | None = None) -> FixedPointResult:
    """Iterate ``T^k`` and accept only points that ``T`` itself fixes.

    Reported residuals are those of ``T``; the ones of ``T^k`` go to the
    diagnostics.
    """
    if k < 1:
        raise ValueError(f"Power must be a positive integer, got {k}")
    if k == 1:
        return picard(mapping, dist, x0, cfg, contraction)
    _check_contraction(contraction)
    cfg = cfg or SolverConfig()

    def fixed_by_base(x: Point) -> bool:
        fwd, bwd = _residuals(mapping, dist, x)
        return fwd <= cfg.tol and bwd <= cfg.tol

    result = _iterate(
        compose_power(mapping, k), dist, x0, cfg, contraction, fixed_by_base)
    fwd, bwd = _residuals(mapping, dist, result.point)
    diagnostics = dict(
        result.diagnostics,
        power=k,
        power_forward_residual=result.forward_residual,
        power_backward_residual=result.backward_residual,
        contraction_certificate=contraction is not None)
    if result.status is Status.MAX_ITER_EXCEEDED and contraction is None:
        logger.warning("T^%s carries no contraction certificate", k)
    return replace(
        result,
        forward_residual=fwd,
        backward_residual=bwd,
        diagnostics=diagnostics)


def edelstein_minimize(
        mapping: Mapping,
        dist: DistanceLike,
        candidates: Iterable[PointLike],
        cfg: SolverConfig | None = None) -> FixedPointResult:
    """Minimize ``g(z) = d(z, Tz)`` over the candidates (first index wins
    ties), then refine by Picard iteration from the minimizer."""
    points = as_points(candidates)
    if not points:
        raise EmptySampleError("Edelstein minimization needs candidates")
    values = np.array([dist(z, mapping(z)) for z in points])
    index = int(np.argmin(values))
    logger.info(
        "g is minimal at candidate %s (%s): %s",
        index, points[index].tolist(), values[index])
    result = picard(mapping, dist, points[index], cfg)
    return replace(
        result,
        diagnostics=dict(
            result.diagnostics,
            argmin_index=index,
            argmin=points[index].tolist(),
            g_min=float(values[index])))


# AVERAGED FAMILIES


class SchauderAnchor(Descriptor):
    """``S_n x = (1 - 1/n) T x + x0 / n``."""
    kind: Literal["schauder_anchor"] = "schauder_anchor"
    x0: tuple[float, ...] = Field(min_length=1)


class SapfAnchor(Descriptor):
    """``S_n x = a0 / n + (1 - 1/n) T x`` with ``a0 = T b``."""
    kind: Literal["sapf_anchor"] = "sapf_anchor"
    b: tuple[float, ...] = Field(min_length=1)


class Scaling(Descriptor):
    """``T_n x = t_n T x`` with ``t_n = n / (n + 1)``."""
    kind: Literal["scaling"] = "scaling"
    x0: tuple[float, ...] | None = None


AveragedVariant = Annotated[
    SchauderAnchor | SapfAnchor | Scaling,
    Field(discriminator="kind")]


@dataclass(frozen=True)
class AveragedMap:
    """``x -> weight * T x + anchor_weight * anchor``."""
    mapping: Mapping
    weight: float
    anchor: Point
    anchor_weight: float

    def __call__(self, x: Point) -> Point:
        return self.weight * self.mapping(x) + self.anchor_weight * self.anchor


@dataclass(frozen=True, eq=False)
class FamilyMember:
    n: int
    point: Point
    forward_residual: float
    backward_residual: float
    bound: float
    bound_respected: bool
    status: Status
    iterations: int

    def to_dict(self) -> dict:
        return dict(
            n=self.n,
            point=self.point.tolist(),
            forward_residual=self.forward_residual,
            backward_residual=self.backward_residual,
            bound=self.bound,
            bound_respected=self.bound_respected,
            status=str(self.status),
            iterations=self.iterations)


@dataclass(frozen=True, eq=False)
class AveragedFamily:
    """Fixed points ``x_n`` of the averaged maps for ``n = 2..n_max``.

    ``failed_at`` is the first ``n`` whose inner solve did not converge;
    the family stops there.
    """
    variant: str
    members: tuple[FamilyMember, ...]
    constant: float
    failed_at: int | None = None
    certificate: str | None = None

    @property
    def complete(self) -> bool:
        return self.failed_at is None

    @property
    def bound_respected(self) -> bool:
        return all(m.bound_respected for m in self.members)

    @property
    def points(self) -> list[Point]:
        return [m.point for m in self.members if m.status is Status.CONVERGED]

    def to_dict(self) -> dict:
        return dict(
            variant=self.variant,
            constant=self.constant,
            complete=self.complete,
            failed_at=self.failed_at,
            certificate=self.certificate,
            bound_respected=self.bound_respected,
            members=[m.to_dict() for m in self.members])


def _sample_radius(
        norm: NormBase,
        center: Point,
        sample: Sequence[Point]) -> float:
    """``sup ‖x - center|`` over the sample."""
    return float(norm.evaluate_many(np.vstack(sample) - center).max())


def averaged_family(
        mapping: Mapping,
        norm: NormBase,
        variant: SchauderAnchor | SapfAnchor | Scaling,
        n_max: int,
        cfg: SolverConfig | None = None,
        sample_K: Iterable[PointLike] = (),
        slack: NonNegativeFloat = DEFAULT_SLACK,
        certificate: str | None = None) -> AveragedFamily:
    """Solve the averaged contractions for ``n = 2..n_max`` and compare
    each forward residual ``‖T x_n - x_n|`` with the bound its variant
    yields. For the anchored variants ``‖T x_n - x_n| = ‖T x_n - a0| / n``
    with ``a0`` the anchor, bounded by the forward radius of the sample
    about ``b`` or ``x0``.

    The bound constants are suprema over ``sample_K`` inflated by
    ``slack``. Each solve starts from the previous fixed point.
    """
    cfg = cfg or SolverConfig()
    if n_max < 2:
        raise ValueError(f"Family needs n_max >= 2, got {n_max}")
    sample = as_points(sample_K)
    if not sample:
        raise EmptySampleError("Averaged family needs a sample of K")
    check_dimension(norm.dim, *sample)
    dist = induced_distance(norm, Direction.FORWARD)
    if isinstance(variant, SapfAnchor):
        b = as_point(variant.b)
        anchor = as_point(mapping(b))
        constant = _sample_radius(norm, b, sample) * (1 + slack)
        start = b
    elif isinstance(variant, SchauderAnchor):
        anchor = as_point(variant.x0)
        constant = _sample_radius(norm, anchor, sample) * (1 + slack)
        start = anchor
    else:
        start = sample[0] if variant.x0 is None else as_point(variant.x0)
        anchor = np.zeros_like(start)
        radius = _sample_radius(norm, start, sample) * (1 + slack)
        constant = max(radius, norm.evaluate(mapping(start)))
    check_dimension(sample[0].size, anchor, start)

    members: list[FamilyMember] = []
    failed_at = None
    for n in range(2, n_max + 1):
        if isinstance(variant, Scaling):
            t_n = n / (n + 1)
            averaged = AveragedMap(mapping, t_n, anchor, 0.0)
            contraction, bound = t_n, 2 * (1 - t_n) * constant
        else:
            averaged = AveragedMap(mapping, 1 - 1 / n, anchor, 1 / n)
            contraction, bound = 1 - 1 / n, constant / n
        inner = picard(averaged, dist, start, cfg)
        fwd, bwd = _residuals(mapping, dist, inner.point)
        respected = bool(fwd <= bound + cfg.tol)
        members.append(
            FamilyMember(
                n=n,
                point=inner.point,
                forward_residual=fwd,
                backward_residual=bwd,
                bound=bound,
                bound_respected=respected,
                status=inner.status,
                iterations=inner.iterations))
        logger.debug(
            "Family %s n=%s (contraction %s): residuals %s, %s vs bound %s",
            variant.kind, n, contraction, fwd, bwd, bound)
        if not inner.converged:
            failed_at = n
            logger.warning(
                "Averaged map for n=%s did not converge: %s",
                n, inner.status)
            break
        if not respected:
            logger.warning(
                "Residual %s exceeds bound %s at n=%s", fwd, bound, n)
        start = inner.point
    return AveragedFamily(
        variant=variant.kind,
        members=tuple(members),
        constant=constant,
        failed_at=failed_at,
        certificate=certificate)


# GOEBEL-KARLOVITZ


@dataclass(frozen=True, eq=False)
class GkReport:
    """Tail averages of ``‖x_n - x|`` against ``Diam(K)``.

    An inconsistent verdict is evidence that ``K`` is not minimal; a
    consistent one proves nothing.
    """
    verdict: Verdict
    diameter: float | None
    tails: tuple[float, ...] = ()
    gaps: tuple[float, ...] = ()
    witnesses: tuple[Point, ...] = ()
    threshold: float = DEFAULT_GK_THRESHOLD
    reason: str = ""

    def to_dict(self) -> dict:
        verdict = (
            "consistent_with_minimal"
            if self.verdict is Verdict.CONSISTENT
            else str(self.verdict))
        return dict(
            verdict=verdict,
            diameter=self.diameter,
            tails=list(self.tails),
            gaps=list(self.gaps),
            witnesses=[p.tolist() for p in self.witnesses],
            threshold=self.threshold,
            reason=self.reason)


def gk_diagnostic(
        family: AveragedFamily | Sequence[PointLike],
        sample_K: Iterable[PointLike],
        norm: NormBase,
        threshold: float = DEFAULT_GK_THRESHOLD) -> GkReport:
    """Compare ``mean ‖x_n - x|`` over the last quarter of the family with
    ``Diam(K)`` for every sample point ``x``; a gap above
    ``threshold * Diam(K)`` is a witness of non-minimality."""
    points = as_points(
        family.points if isinstance(family, AveragedFamily) else family)
    K = FiniteSubset.of(sample_K, norm)
    if len(points) < 4:
        return GkReport(
            Verdict.UNDETERMINED,
            None,
            threshold=threshold,
            reason="family has fewer than 4 entries")
    check_dimension(K.dim, *points)
    diam = diameter(K)
    tail = np.vstack(points[-(len(points) // 4):])
    tails = tuple(
        float(norm.evaluate_many(tail - x).mean()) for x in K.points)
    gaps = tuple(abs(t - diam) for t in tails)
    witnesses = tuple(
        x for x, gap in zip(K.points, gaps)
        if gap > threshold * diam + 1e-9)
    if witnesses:
        logger.warning(
            "%s of %s sample points have tails away from Diam=%s",
            len(witnesses), len(K), diam)
        verdict = Verdict.INCONSISTENT
    else:
        verdict = Verdict.CONSISTENT
    return GkReport(verdict, diam, tails, gaps, witnesses, threshold)
