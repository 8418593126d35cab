"""Scenario tasks by name."""

from snake.asymmetric.tasks.analysis import (
    ClassifyTask, RefineTask, SequenceTask)
from snake.asymmetric.tasks.base import Outcome, Summary, Task
from snake.asymmetric.tasks.convexity import MazurTask, MinkowskiTask
from snake.asymmetric.tasks.geometry import GeometryTask, MinimalInvariantTask
from snake.asymmetric.tasks.solvers import (
    AveragedFamilyTask, EdelsteinTask, GkDiagnosticTask, PicardTask,
    PowerPicardTask)
from snake.asymmetric.tasks.spaces import AxiomsTask, EvalTask

TASKS: dict[str, type[Task]] = dict(
    eval=EvalTask,
    axioms=AxiomsTask,
    classify=ClassifyTask,
    refine=RefineTask,
    sequence=SequenceTask,
    picard=PicardTask,
    power_picard=PowerPicardTask,
    edelstein=EdelsteinTask,
    averaged_family=AveragedFamilyTask,
    gk_diagnostic=GkDiagnosticTask,
    geometry=GeometryTask,
    mazur=MazurTask,
    minkowski=MinkowskiTask,
    minimal_invariant=MinimalInvariantTask)

__all__ = ("Outcome", "Summary", "TASKS", "Task")
