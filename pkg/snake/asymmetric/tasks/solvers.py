"""Fixed-point tasks."""

from collections.abc import Sequence
from typing import Annotated, Literal

from pydantic import Field, NonNegativeFloat, PositiveFloat, PositiveInt

from snake.asymmetric.analysis import (
    FlagStatus, SamplerConfig, classify_map, domain_dim)
from snake.asymmetric.exceptions import ScenarioError
from snake.asymmetric.scenario import Coords, Params
from snake.asymmetric.solvers import (
    DEFAULT_GK_THRESHOLD, DEFAULT_SLACK, AveragedFamily, AveragedVariant,
    Status, averaged_family, edelstein_minimize, gk_diagnostic, picard,
    power_picard)
from snake.asymmetric.spaces import Direction, PointLike, induced_distance
from snake.asymmetric.tasks.base import Outcome, Task

Contraction = Annotated[float, Field(ge=0, lt=1)] | Literal["classify"]


class PicardParams(Params):
    x0: Coords
    contraction: Contraction | None = None
    sampler: SamplerConfig | None = None


class PowerPicardParams(PicardParams):
    k: PositiveInt


class FixedPointTask[P: PicardParams](Task[P]):
    """Picard-style tasks with an optional contraction certificate."""

    def contraction(self) -> tuple[float | None, dict]:
        """The contraction constant as given, or as estimated when the
        map classifies as an f-contraction."""
        value = self.params.contraction
        if not isinstance(value, str):
            return value, {}
        report = classify_map(
            self.scenario.mapping,
            self.scenario.distance,
            self.sampler(self.params.sampler))
        certified = report.f_contraction.status is FlagStatus.HOLDS
        return (
            report.k_f_estimate if certified else None,
            dict(classification=report.to_dict()))


class PicardTask(FixedPointTask[PicardParams]):
    params_model = PicardParams

    @property
    def task_name(self) -> str:
        return "picard"

    def handle(self) -> Outcome:
        contraction, diagnostics = self.contraction()
        return Outcome.from_fixed_point(
            picard(
                self.scenario.mapping,
                self.scenario.distance,
                self.params.x0,
                self.scenario.solver,
                contraction),
            **diagnostics)


class PowerPicardTask(FixedPointTask[PowerPicardParams]):
    params_model = PowerPicardParams

    @property
    def task_name(self) -> str:
        return "power_picard"

    def handle(self) -> Outcome:
        contraction, diagnostics = self.contraction()
        return Outcome.from_fixed_point(
            power_picard(
                self.scenario.mapping,
                self.scenario.distance,
                self.params.k,
                self.params.x0,
                self.scenario.solver,
                contraction),
            **diagnostics)


class EdelsteinParams(Params):
    candidates: tuple[Coords, ...] | None = Field(default=None, min_length=1)
    sampler: SamplerConfig | None = None


class EdelsteinTask(Task[EdelsteinParams]):
    params_model = EdelsteinParams

    @property
    def task_name(self) -> str:
        return "edelstein"

    def handle(self) -> Outcome:
        mapping, dist = self.scenario.mapping, self.scenario.distance
        candidates: Sequence[PointLike] | None = self.params.candidates
        if candidates is None:
            candidates = self.sampler(self.params.sampler).grid(
                domain_dim(mapping, dist))
        return Outcome.from_fixed_point(
            edelstein_minimize(
                mapping, dist, candidates, self.scenario.solver))


class FamilyParams(Params):
    variant: AveragedVariant
    n_max: int = Field(ge=2)
    sample: tuple[Coords, ...] = Field(min_length=1)
    slack: NonNegativeFloat = DEFAULT_SLACK
    certify: SamplerConfig | None = None


class GkParams(Params):
    sample: tuple[Coords, ...] = Field(min_length=1)
    family: tuple[Coords, ...] | None = None
    variant: AveragedVariant | None = None
    n_max: int | None = Field(default=None, ge=2)
    slack: NonNegativeFloat = DEFAULT_SLACK
    threshold: PositiveFloat = DEFAULT_GK_THRESHOLD


class FamilyTask[P: FamilyParams | GkParams](Task[P]):
    """Tasks running an averaged family on a normed space."""

    def family(self) -> AveragedFamily:
        variant, n_max = self.params.variant, self.params.n_max
        if variant is None or n_max is None:
            raise ScenarioError("An averaged family needs variant and n_max")
        norm, mapping = self.scenario.norm, self.scenario.mapping
        certificate = None
        if getattr(self.params, "certify", None) is not None:
            report = classify_map(
                mapping,
                induced_distance(norm, Direction.FORWARD),
                self.sampler(self.params.certify))
            certificate = f"f_nonexpansive: {report.f_nonexpansive.status}"
        return averaged_family(
            mapping,
            norm,
            variant,
            n_max,
            self.scenario.solver,
            self.params.sample,
            self.params.slack,
            certificate)


class AveragedFamilyTask(FamilyTask[FamilyParams]):
    params_model = FamilyParams

    @property
    def task_name(self) -> str:
        return "averaged_family"

    def handle(self) -> Outcome:
        family = self.family()
        last = family.members[-1]
        if not family.complete:
            status = str(last.status)
        elif not family.bound_respected:
            status = "bound_violated"
        else:
            status = str(Status.CONVERGED)
        return Outcome(
            passed=family.complete and family.bound_respected,
            status=status,
            point=last.point.tolist(),
            iterations=sum(m.iterations for m in family.members),
            forward_residual=last.forward_residual,
            backward_residual=last.backward_residual,
            bound_respected=family.bound_respected,
            diagnostics=family.to_dict())


class GkDiagnosticTask(FamilyTask[GkParams]):
    """Goebel-Karlovitz check of a given or computed family."""
    params_model = GkParams

    @property
    def task_name(self) -> str:
        return "gk_diagnostic"

    def handle(self) -> Outcome:
        diagnostics: dict = {}
        family: AveragedFamily | Sequence[PointLike]
        if self.params.family is not None:
            family = self.params.family
        else:
            computed = self.family()
            diagnostics["family"] = computed.to_dict()
            family = computed
        report = gk_diagnostic(
            family,
            self.params.sample,
            self.scenario.norm,
            self.params.threshold)
        summary = report.to_dict()
        diagnostics.update(summary)
        return Outcome(
            summary["verdict"] == "consistent_with_minimal",
            summary["verdict"],
            diagnostics=diagnostics)
