"""Evaluation and axiom tasks."""

from pydantic import NonNegativeFloat, PositiveFloat, PositiveInt

from snake.asymmetric.analysis import SamplerConfig
from snake.asymmetric.exceptions import ScenarioError
from snake.asymmetric.scenario import Coords, Params
from snake.asymmetric.spaces import (
    DEFAULT_TOL, Direction, FiniteTableDistance, Point, PointLike,
    check_distance_axioms, check_norm_axioms, induced_distance)
from snake.asymmetric.tasks.base import Outcome, Task


class EvalParams(Params):
    pairs: tuple[tuple[Coords, Coords], ...] = ()
    vectors: tuple[Coords, ...] = ()


class EvalTask(Task[EvalParams]):
    """Evaluate distances on pairs and norms on vectors."""
    params_model = EvalParams

    @property
    def task_name(self) -> str:
        return "eval"

    def handle(self) -> Outcome:
        if not self.params.pairs and not self.params.vectors:
            raise ScenarioError("Nothing to evaluate: give pairs or vectors")
        diagnostics: dict = {}
        if self.params.pairs:
            dist = self.scenario.distance
            diagnostics["distances"] = [
                dict(
                    x=list(x),
                    y=list(y),
                    forward=dist(x, y),
                    backward=dist(y, x))
                for x, y in self.params.pairs]
        if self.params.vectors:
            norm = self.scenario.norm
            diagnostics["norms"] = [
                dict(vector=list(v), value=norm.evaluate(v))
                for v in self.params.vectors]
        return Outcome(True, "evaluated", diagnostics=diagnostics)


class AxiomsParams(Params):
    sample: tuple[Coords, ...] | None = None
    sampler: SamplerConfig | None = None
    dimension: PositiveInt | None = None
    tol: PositiveFloat = DEFAULT_TOL
    scalars: tuple[NonNegativeFloat, ...] = (0.0, 0.5, 2.0)


class AxiomsTask(Task[AxiomsParams]):
    """Check the distance axioms, or the norm axioms together with the
    distance axioms of both induced distances."""
    params_model = AxiomsParams

    @property
    def task_name(self) -> str:
        return "axioms"

    def handle(self) -> Outcome:
        sample = self.sample()
        tol = self.params.tol
        space = self.scenario.space
        if self.scenario.is_norm:
            norm = self.scenario.norm
            reports = dict(
                norm=check_norm_axioms(
                    norm, sample, self.params.scalars, tol),
                forward=check_distance_axioms(
                    induced_distance(norm, Direction.FORWARD), sample, tol),
                backward=check_distance_axioms(
                    induced_distance(norm, Direction.BACKWARD), sample, tol))
        else:
            reports = dict(
                distance=check_distance_axioms(
                    space, sample, tol))  # type: ignore[arg-type]
        passed = all(report.consistent for report in reports.values())
        return Outcome(
            passed,
            "consistent" if passed else "violations_found",
            diagnostics={
                name: report.to_dict()
                for name, report in reports.items()})

    def sample(self) -> list[PointLike] | list[Point]:
        if self.params.sample is not None:
            return list(self.params.sample)
        space = self.scenario.space
        if isinstance(space, FiniteTableDistance):
            return list(space.points)
        dim = self.scenario.dim or self.params.dimension
        if dim is None:
            raise ScenarioError(
                "Axiom grid needs a dimension for this space")
        return self.sampler(self.params.sampler).grid(dim)
