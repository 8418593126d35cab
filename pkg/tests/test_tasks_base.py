"""Isolated tests for snake.asymmetric.tasks.base."""

from unittest.mock import MagicMock, PropertyMock

import pytest

from snake.asymmetric import spaces
from snake.asymmetric.solvers import FixedPointResult, Status
from snake.asymmetric.tasks.base import NoParams, Outcome, Task


def test_tasks_base_constructor():
    """Test Task class initialization."""
    scenario = MagicMock()
    task = Task(scenario)
    assert task.scenario == scenario
    assert task.params_model is NoParams
    with pytest.raises(NotImplementedError):
        task.task_name
    with pytest.raises(NotImplementedError):
        task.handle()


def test_tasks_base_params(patches):
    """Test params are validated once against the params model."""
    scenario = MagicMock()
    task = Task(scenario)
    patched = patches(
        "Task.params_model",
        prefix="snake.asymmetric.tasks.base")

    with patched as (m_model, ):
        assert (
            task.params
            == m_model.model_validate.return_value)

    assert (
        m_model.model_validate.call_args
        == [(scenario.params, ), {}])
    assert "params" in task.__dict__


def test_tasks_base_result(patches):
    """Test the summary keys and their order."""
    task = Task(MagicMock())
    outcome = MagicMock()
    patched = patches(
        ("Task.task_name",
         dict(new_callable=PropertyMock)),
        prefix="snake.asymmetric.tasks.base")

    with patched as (m_name, ):
        result = task.result(outcome)

    assert (
        result
        == {"task": m_name.return_value,
            "status": outcome.status,
            "point": outcome.point,
            "iterations": outcome.iterations,
            "forward_residual": outcome.forward_residual,
            "backward_residual": outcome.backward_residual,
            "bound_respected": outcome.bound_respected,
            "diagnostics": outcome.diagnostics})
    assert list(result) == [
        "task", "status", "point", "iterations", "forward_residual",
        "backward_residual", "bound_respected", "diagnostics"]


@pytest.mark.parametrize("sampler", [None, MagicMock()])
def test_tasks_base_sampler(patches, sampler):
    """Test the scenario seed overrides the sampler seed."""
    scenario = MagicMock()
    task = Task(scenario)
    patched = patches(
        "SamplerConfig",
        prefix="snake.asymmetric.tasks.base")

    with patched as (m_sampler, ):
        result = task.sampler(sampler)

    expected = sampler or m_sampler.return_value
    assert result == expected.model_copy.return_value
    assert (
        expected.model_copy.call_args
        == [(), dict(update=dict(seed=scenario.seed))])
    if sampler:
        assert not m_sampler.called
    else:
        assert m_sampler.call_args == [(), {}]


@pytest.mark.parametrize("passed", [True, False])
def test_tasks_base_outcome_exit_code(passed):
    assert Outcome(passed, "STATUS").exit_code == (0 if passed else 1)


@pytest.mark.parametrize(
    "status",
    [Status.CONVERGED, Status.MAX_ITER_EXCEEDED, Status.DIVERGED])
def test_tasks_base_outcome_from_fixed_point(status):
    trace = MagicMock()
    result = FixedPointResult(
        status=status,
        point=spaces.as_point([0.5, 1]),
        iterations=7,
        forward_residual=0.25,
        backward_residual=0.125,
        trace=trace,
        bound_respected=True,
        diagnostics=dict(a=1, b=2))
    outcome = Outcome.from_fixed_point(result, b=3, c=4)
    assert outcome.passed == (status is Status.CONVERGED)
    assert outcome.status == str(status)
    assert outcome.point == [0.5, 1.0]
    assert outcome.iterations == 7
    assert outcome.forward_residual == 0.25
    assert outcome.backward_residual == 0.125
    assert outcome.bound_respected
    assert outcome.diagnostics == dict(a=1, b=3, c=4)
    assert outcome.trace is trace
