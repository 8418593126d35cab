"""Classification and sequence tasks."""

from pydantic import Field, PositiveFloat

from snake.asymmetric.analysis import (
    SamplerConfig, Verdict, classify_map, convergence_residuals,
    is_b_cauchy_prefix, is_f_cauchy_prefix, refine_classification,
    verify_prop_k12)
from snake.asymmetric.exceptions import ScenarioError
from snake.asymmetric.scenario import Coords, Params
from snake.asymmetric.spaces import DEFAULT_TOL, Direction
from snake.asymmetric.tasks.base import Outcome, Task


class ClassifyParams(Params):
    sampler: SamplerConfig | None = None


class ClassifyTask(Task[ClassifyParams]):
    params_model = ClassifyParams

    @property
    def task_name(self) -> str:
        return "classify"

    def handle(self) -> Outcome:
        report = classify_map(
            self.scenario.mapping,
            self.scenario.distance,
            self.sampler(self.params.sampler))
        return Outcome(True, "classified", diagnostics=report.to_dict())


class RefineParams(Params):
    sampler: SamplerConfig | None = None
    levels: int = Field(default=3, ge=2)
    tol: PositiveFloat = DEFAULT_TOL


class RefineTask(Task[RefineParams]):
    """Classification over nested grids."""
    params_model = RefineParams

    @property
    def task_name(self) -> str:
        return "refine"

    def handle(self) -> Outcome:
        report = refine_classification(
            self.scenario.mapping,
            self.scenario.distance,
            self.sampler(self.params.sampler),
            self.params.levels,
            self.params.tol)
        return Outcome(True, "classified", diagnostics=report.to_dict())


class SequenceParams(Params):
    seq: tuple[Coords, ...] = Field(min_length=2)
    eps: PositiveFloat
    limit: Coords | None = None
    subsequence: tuple[int, ...] | None = None


class SequenceTask(Task[SequenceParams]):
    """Cauchy prefixes, residuals to a limit and the subsequence
    criterion."""
    params_model = SequenceParams

    @property
    def task_name(self) -> str:
        return "sequence"

    def handle(self) -> Outcome:
        dist = self.scenario.distance
        seq, eps, limit = self.params.seq, self.params.eps, self.params.limit
        diagnostics: dict = dict(
            f_cauchy=is_f_cauchy_prefix(seq, dist, eps).to_dict(),
            b_cauchy=is_b_cauchy_prefix(seq, dist, eps).to_dict())
        if limit is not None:
            diagnostics.update(
                forward_residuals=convergence_residuals(
                    seq, limit, dist, Direction.FORWARD),
                backward_residuals=convergence_residuals(
                    seq, limit, dist, Direction.BACKWARD))
        if self.params.subsequence is None:
            return Outcome(True, "checked", diagnostics=diagnostics)
        if limit is None:
            raise ScenarioError("Subsequence check needs a limit")
        check = verify_prop_k12(
            seq, self.params.subsequence, limit, dist, eps)
        diagnostics["subsequence"] = check.to_dict()
        return Outcome(
            check.verdict is not Verdict.INCONSISTENT,
            str(check.verdict),
            diagnostics=diagnostics)
