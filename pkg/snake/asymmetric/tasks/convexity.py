"""Convex approximation tasks."""

from pydantic import Field, PositiveFloat, PositiveInt

from snake.asymmetric.convexity import (
    mazur_approximation, minkowski_functional)
from snake.asymmetric.scenario import Coords, Params
from snake.asymmetric.spaces import DEFAULT_TOL
from snake.asymmetric.tasks.base import Outcome, Task


class MazurParams(Params):
    seq: tuple[Coords, ...] = Field(min_length=1)
    x0: Coords
    eps: PositiveFloat
    grid_q: PositiveInt = 20


class MazurTask(Task[MazurParams]):
    params_model = MazurParams

    @property
    def task_name(self) -> str:
        return "mazur"

    def handle(self) -> Outcome:
        result = mazur_approximation(
            self.params.seq,
            self.params.x0,
            self.scenario.norm,
            self.params.eps,
            self.params.grid_q)
        return Outcome(
            result.found,
            "found" if result.found else "not_found",
            point=result.point.tolist(),
            diagnostics=result.to_dict())


class MinkowskiParams(Params):
    vertices: tuple[Coords, ...] = Field(min_length=1)
    z: Coords
    tol: PositiveFloat = DEFAULT_TOL


class MinkowskiTask(Task[MinkowskiParams]):
    params_model = MinkowskiParams

    @property
    def task_name(self) -> str:
        return "minkowski"

    def handle(self) -> Outcome:
        value = minkowski_functional(
            self.params.vertices, self.params.z, self.params.tol)
        return Outcome(
            True,
            "computed",
            point=list(self.params.z),
            diagnostics=dict(value=value))
