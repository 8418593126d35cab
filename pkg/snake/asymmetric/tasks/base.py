"""Base Task class for scenario tasks."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import ClassVar, cast

from snake.asymmetric.analysis import SamplerConfig
from snake.asymmetric.scenario import Params, Scenario
from snake.asymmetric.solvers import ConvergenceTrace, FixedPointResult

Summary = dict[str, object]


class NoParams(Params):
    pass


@dataclass(frozen=True, eq=False)
class Outcome:
    """What a task found, before it is shaped into a summary."""
    passed: bool
    status: str
    point: list[float] | None = None
    iterations: int | None = None
    forward_residual: float | None = None
    backward_residual: float | None = None
    bound_respected: bool | None = None
    diagnostics: dict = field(default_factory=dict)
    trace: ConvergenceTrace | None = None

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    @classmethod
    def from_fixed_point(
            cls,
            result: FixedPointResult,
            **diagnostics: object) -> "Outcome":
        return cls(
            passed=result.converged,
            status=str(result.status),
            point=result.point.tolist(),
            iterations=result.iterations,
            forward_residual=result.forward_residual,
            backward_residual=result.backward_residual,
            bound_respected=result.bound_respected,
            diagnostics={**result.diagnostics, **diagnostics},
            trace=result.trace)


class Task[P: Params]:
    """Base class for scenario tasks, generic in their parameter model."""
    params_model: ClassVar[type[Params]] = NoParams

    def __init__(self, scenario: Scenario) -> None:
        self.scenario = scenario

    @cached_property
    def params(self) -> P:
        """Task parameters, validated strictly."""
        return cast(P, self.params_model.model_validate(self.scenario.params))

    @property
    def task_name(self) -> str:
        raise NotImplementedError

    def handle(self) -> Outcome:
        """Run the task."""
        raise NotImplementedError

    def result(self, outcome: Outcome) -> Summary:
        """Format the summary."""
        return {
            "task": self.task_name,
            "status": outcome.status,
            "point": outcome.point,
            "iterations": outcome.iterations,
            "forward_residual": outcome.forward_residual,
            "backward_residual": outcome.backward_residual,
            "bound_respected": outcome.bound_respected,
            "diagnostics": outcome.diagnostics}

    def sampler(self, sampler: SamplerConfig | None) -> SamplerConfig:
        """The sampler with the scenario seed applied."""
        return (sampler or SamplerConfig()).model_copy(
            update=dict(seed=self.scenario.seed))
