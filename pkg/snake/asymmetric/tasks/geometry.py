"""Geometry and invariant set tasks."""

from collections.abc import Callable
from typing import Literal

from pydantic import Field, PositiveFloat

from snake.asymmetric.exceptions import ScenarioError
from snake.asymmetric.geometry import (
    FiniteSubset, backward_radius, bounded_witness, diameter, forward_radius,
    hull_weights, is_forward_diametral, mch_check, minimal_invariant_sets,
    normal_structure_witness, periodic_points)
from snake.asymmetric.maps import TableMap
from snake.asymmetric.scenario import Coords, Params
from snake.asymmetric.spaces import DEFAULT_TOL
from snake.asymmetric.tasks.base import Outcome, Task

GeometryOp = Literal[
    "diameter",
    "radii",
    "diametral",
    "nondiametral",
    "bounded",
    "hull_membership",
    "mch"]


class GeometryParams(Params):
    op: GeometryOp
    points: tuple[Coords, ...] = Field(min_length=1)
    u: Coords | None = None
    z: Coords | None = None
    sample: tuple[Coords, ...] | None = None
    tol: PositiveFloat = DEFAULT_TOL


class GeometryTask(Task[GeometryParams]):
    """One geometric operation on a finite subset or a vertex list."""
    params_model = GeometryParams

    @property
    def task_name(self) -> str:
        return "geometry"

    @property
    def subset(self) -> FiniteSubset:
        return FiniteSubset.of(self.params.points, self.scenario.norm)

    def handle(self) -> Outcome:
        handler: Callable[[], Outcome] = getattr(
            self, f"handle_{self.params.op}")
        return handler()

    def handle_diameter(self) -> Outcome:
        return Outcome(
            True, "computed", diagnostics=dict(diameter=diameter(self.subset)))

    def handle_radii(self) -> Outcome:
        u, K = self._required("u"), self.subset
        return Outcome(
            True,
            "computed",
            point=list(u),
            diagnostics=dict(
                forward_radius=forward_radius(u, K),
                backward_radius=backward_radius(u, K),
                diameter=diameter(K)))

    def handle_diametral(self) -> Outcome:
        u = self._required("u")
        diametral = is_forward_diametral(u, self.subset, self.params.tol)
        return Outcome(
            diametral,
            "diametral" if diametral else "not_diametral",
            point=list(u),
            diagnostics=dict(diametral=diametral))

    def handle_nondiametral(self) -> Outcome:
        witness = normal_structure_witness(self.subset, self.params.tol)
        if witness.degenerate:
            status = "degenerate"
        elif witness.point is None:
            status = "forward_diametral"
        else:
            status = "found"
        return Outcome(
            True,
            status,
            point=None if witness.point is None else witness.point.tolist(),
            diagnostics=witness.to_dict())

    def handle_bounded(self) -> Outcome:
        witness = bounded_witness(self.subset)
        contained = witness.f_contained and witness.b_contained
        return Outcome(
            contained,
            "bounded" if contained else "not_contained",
            point=witness.center.tolist(),
            diagnostics=witness.to_dict())

    def handle_hull_membership(self) -> Outcome:
        membership = hull_weights(
            self.params.points, self._required("z"), self.params.tol)
        return Outcome(
            membership.member,
            "member" if membership.member else "not_member",
            point=list(self._required("z")),
            diagnostics=dict(
                member=membership.member,
                weights=(
                    None
                    if membership.weights is None
                    else membership.weights.tolist()),
                infeasibility=membership.infeasibility))

    def handle_mch(self) -> Outcome:
        report = mch_check(
            self.params.points,
            self.scenario.mapping,
            self.params.sample or self.params.points,
            self.params.tol)
        return Outcome(
            report.holds,
            "holds" if report.holds else "fails",
            point=None if report.witness is None else report.witness.tolist(),
            diagnostics=report.to_dict())

    def _required(self, name: str) -> Coords:
        value: Coords | None = getattr(self.params, name)
        if value is None:
            raise ScenarioError(
                f"Geometry op {self.params.op} needs parameter {name}")
        return value


class MinimalInvariantParams(Params):
    points: tuple[Coords, ...] | None = Field(default=None, min_length=1)


class MinimalInvariantTask(Task[MinimalInvariantParams]):
    """Minimal invariant sets of a tabulated map."""
    params_model = MinimalInvariantParams

    @property
    def task_name(self) -> str:
        return "minimal_invariant"

    def handle(self) -> Outcome:
        mapping = self.scenario.mapping
        if not isinstance(mapping, TableMap):
            raise ScenarioError(
                "Minimal invariant sets need a finite_table map")
        sets = minimal_invariant_sets(self.params.points, mapping)
        return Outcome(
            True,
            "computed",
            diagnostics=dict(
                sets=[[p.tolist() for p in s.points] for s in sets],
                periodic_points=[
                    p.tolist()
                    for p in periodic_points(self.params.points, mapping)]))
