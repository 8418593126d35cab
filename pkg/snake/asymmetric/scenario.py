"""Declarative scenario files."""

from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from snake.asymmetric.exceptions import ScenarioError
from snake.asymmetric.maps import MapDescriptor
from snake.asymmetric.solvers import SolverConfig
from snake.asymmetric.spaces import (
    Direction, DistanceBase, LineOnesidedDistance, LineQuarterDistance,
    NormBackwardDistance, NormBase, NormForwardDistance, FiniteTableDistance,
    PlanarMaxNorm, ScaledNorm, SymmetricDistance, SymmetricLiftNorm,
    UpperNorm, WeightedUpperNorm, induced_distance)

Coords = tuple[float, ...]

SpaceDescriptor = Annotated[
    LineOnesidedDistance
    | LineQuarterDistance
    | NormForwardDistance
    | NormBackwardDistance
    | SymmetricDistance
    | FiniteTableDistance
    | UpperNorm
    | WeightedUpperNorm
    | PlanarMaxNorm
    | SymmetricLiftNorm
    | ScaledNorm,
    Field(discriminator="kind")]

TaskName = Literal[
    "eval",
    "axioms",
    "classify",
    "refine",
    "sequence",
    "picard",
    "power_picard",
    "edelstein",
    "averaged_family",
    "gk_diagnostic",
    "geometry",
    "mazur",
    "minkowski",
    "minimal_invariant"]


class Params(BaseModel):
    """Base for strict per-task parameters."""
    model_config = ConfigDict(frozen=True, extra="forbid")


class Scenario(BaseModel):
    """One task on one space, optionally with a self-map."""
    model_config = ConfigDict(frozen=True, extra="forbid")
    space: SpaceDescriptor
    map: MapDescriptor | None = None
    task: TaskName
    params: dict[str, Any] = Field(default_factory=dict)
    solver: SolverConfig = SolverConfig()
    seed: int = 0

    @property
    def is_norm(self) -> bool:
        return isinstance(self.space, NormBase)

    @property
    def distance(self) -> DistanceBase:
        """The scenario distance; a norm contributes its forward
        distance."""
        if isinstance(self.space, NormBase):
            return induced_distance(self.space, Direction.FORWARD)
        return self.space

    @property
    def norm(self) -> NormBase:
        if isinstance(self.space, NormBase):
            return self.space
        if isinstance(self.space, NormForwardDistance | NormBackwardDistance):
            return self.space.norm
        raise ScenarioError(
            f"Task {self.task} needs a normed space, got {self.space.kind}")

    @property
    def mapping(self) -> MapDescriptor:
        if self.map is None:
            raise ScenarioError(f"Task {self.task} needs a map")
        return self.map

    @property
    def dim(self) -> int | None:
        return self.space.dim
