"""Run scenario files, alone or as a suite."""

import asyncio
import json
import logging
import os
import pathlib
from dataclasses import dataclass
from functools import cached_property

from pydantic import ValidationError

from snake.asymmetric.scenario import Scenario
from snake.asymmetric.tasks import TASKS, Summary, Task
from snake.asymmetric.util.trace import write_trace

logger = logging.getLogger(__name__)

SCENARIO_SUFFIX = ".scenario.json"
TRACE_SUFFIX = ".trace.csv"
INPUT_ERROR = 2


@dataclass(frozen=True)
class RunResult:
    exit_code: int
    summary: Summary
    trace_path: pathlib.Path | None = None


def error_summary(message: str) -> Summary:
    return {
        "task": None,
        "status": "input_error",
        "point": None,
        "iterations": None,
        "forward_residual": None,
        "backward_residual": None,
        "bound_respected": None,
        "diagnostics": {"error": message}}


class ScenarioRunner:
    """Run one scenario file.

    Exit codes: 0 when the task succeeds, 1 for a negative verdict and 2
    for any input error.
    """

    def __init__(self, path: str | os.PathLike) -> None:
        self._path_str = path

    @cached_property
    def path(self) -> pathlib.Path:
        return pathlib.Path(self._path_str)

    @property
    def trace_path(self) -> pathlib.Path:
        name = self.path.name
        stem = (
            name[:-len(SCENARIO_SUFFIX)]
            if name.endswith(SCENARIO_SUFFIX)
            else self.path.stem)
        return self.path.with_name(f"{stem}{TRACE_SUFFIX}")

    def load(self) -> Scenario:
        """Parse and validate the scenario file."""
        return Scenario.model_validate(json.loads(self.path.read_text()))

    def task(self, scenario: Scenario) -> Task:
        return TASKS[scenario.task](scenario)

    def handle(self) -> RunResult:
        scenario = self.load()
        task = self.task(scenario)
        outcome = task.handle()
        trace_path = None
        if scenario.solver.record_trace and outcome.trace is not None:
            trace_path = self.trace_path
            write_trace(trace_path, outcome.trace, len(outcome.point or ()))
        logger.info(
            "Scenario %s: %s (exit %s)",
            self.path.name, outcome.status, outcome.exit_code)
        return RunResult(outcome.exit_code, task.result(outcome), trace_path)

    def run(self) -> RunResult:
        """Run the scenario. Input errors and unexpected failures both end
        with exit code 2 and an ``input_error`` summary."""
        try:
            return self.handle()
        except json.JSONDecodeError as e:
            return self.error(
                f"Malformed JSON at line {e.lineno} column {e.colno}: "
                f"{e.msg}")
        except ValidationError as e:
            return self.error(
                f"Invalid scenario: {e.error_count()} errors: "
                + "; ".join(
                    f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
                    for err in e.errors()))
        except (OSError, ValueError) as e:
            return self.error(str(e))
        except Exception as e:
            logger.error(
                "Scenario %s failed unexpectedly", self.path, exc_info=True)
            return RunResult(
                INPUT_ERROR,
                error_summary(f"Unexpected {type(e).__name__}: {e}"))

    def error(self, message: str) -> RunResult:
        logger.error("Scenario %s: %s", self.path, message)
        return RunResult(INPUT_ERROR, error_summary(message))


@dataclass(frozen=True)
class SuiteResult:
    exit_code: int
    report: dict


class SuiteRunner:
    """Run every ``*.scenario.json`` in a directory, in filename order."""

    def __init__(
            self,
            path: str | os.PathLike,
            jobs: int | None = None) -> None:
        self._path_str = path
        self.jobs = jobs

    @cached_property
    def path(self) -> pathlib.Path:
        return pathlib.Path(self._path_str)

    @property
    def scenarios(self) -> list[pathlib.Path]:
        return sorted(
            self.path.glob(f"*{SCENARIO_SUFFIX}"),
            key=lambda p: p.name)

    async def execute(
            self,
            files: list[pathlib.Path]) -> list[RunResult]:
        """Run scenarios in worker threads; results keep input order."""
        semaphore = asyncio.Semaphore(self.jobs or len(files))

        async def run_one(path: pathlib.Path) -> RunResult:
            async with semaphore:
                return await asyncio.to_thread(ScenarioRunner(path).run)
        return list(await asyncio.gather(*(run_one(f) for f in files)))

    async def run(self) -> SuiteResult:
        if self.jobs is not None and self.jobs < 1:
            return self.error(f"jobs must be at least 1, got {self.jobs}")
        if not self.path.is_dir():
            return self.error(f"Suite directory '{self.path}' does not exist")
        files = self.scenarios
        if not files:
            return self.error(
                f"No {SCENARIO_SUFFIX} files in '{self.path}'")
        results = await self.execute(files)
        exit_code = max(r.exit_code for r in results)
        logger.info(
            "Suite %s: %s scenarios, exit %s",
            self.path, len(files), exit_code)
        return SuiteResult(
            exit_code,
            dict(
                scenarios={
                    f.name: r.summary
                    for f, r in zip(files, results)},
                exit_code=exit_code))

    def error(self, message: str) -> SuiteResult:
        logger.error(message)
        return SuiteResult(
            INPUT_ERROR,
            dict(scenarios={}, exit_code=INPUT_ERROR, error=message))
