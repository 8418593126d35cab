"""Tests for snake.asymmetric.cli."""

import json
import pathlib
import shutil
from unittest.mock import MagicMock

import pytest

from snake.asymmetric import cli

SCENARIOS = pathlib.Path(__file__).parent.parent / "scenarios"


def test_cli_parser():
    parser = cli.parser()
    args = parser.parse_args(["run", "a.scenario.json"])
    assert args.command == "run"
    assert args.file == "a.scenario.json"
    assert args.log_level == "WARNING"
    args = parser.parse_args(
        ["--log-level", "DEBUG", "suite", "scenarios", "--jobs", "4"])
    assert args.command == "suite"
    assert args.dir == "scenarios"
    assert args.jobs == 4
    assert args.log_level == "DEBUG"
    assert parser.parse_args(["suite", "x"]).jobs is None


@pytest.mark.parametrize(
    "argv",
    [[], ["solve"], ["run"], ["--log-level", "LOUD", "serve"],
     ["suite", "x", "--jobs", "many"], ["suite", "x", "--jobs", "0"],
     ["suite", "x", "--jobs", "-2"]])
def test_cli_bad_arguments(argv):
    with pytest.raises(SystemExit) as e:
        cli.main(argv)
    assert e.value.code == 2


def test_cli_run(capsys, patches):
    runner = MagicMock()
    patched = patches(
        "logging",
        "ScenarioRunner",
        "dumps",
        prefix="snake.asymmetric.cli")

    with patched as (m_log, m_runner, m_dumps):
        m_runner.return_value.run.return_value = runner
        m_dumps.return_value = "SUMMARY"
        assert (
            cli.main(["--log-level", "INFO", "run", "a.scenario.json"])
            == runner.exit_code)

    assert m_log.basicConfig.call_args[1]["level"] == "INFO"
    assert (
        m_runner.call_args
        == [("a.scenario.json", ), {}])
    assert (
        m_dumps.call_args
        == [(runner.summary, ), {}])
    assert capsys.readouterr().out == "SUMMARY\n"


def test_cli_serve(patches):
    patched = patches(
        "logging",
        prefix="snake.asymmetric.cli")
    patched_mcp = patches(
        "mcp",
        prefix="snake.asymmetric.server")

    with patched, patched_mcp as (m_mcp, ):
        assert cli.main(["serve"]) == 0

    assert (
        m_mcp.run.call_args
        == [(), {}])


def test_cli_run_scenario(capsys, patches, tmp_path):
    shutil.copy(
        SCENARIOS / "picard_half_line_quarter.scenario.json", tmp_path)
    patched = patches(
        "logging",
        prefix="snake.asymmetric.cli")

    with patched:
        code = cli.main(
            ["run", str(tmp_path / "picard_half_line_quarter.scenario.json")])

    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["task"] == "picard"
    assert summary["status"] == "converged"
    assert summary["iterations"] == 33
    assert (tmp_path / "picard_half_line_quarter.trace.csv").exists()


def test_cli_run_input_error(capsys, patches, tmp_path):
    path = tmp_path / "bad.scenario.json"
    path.write_text("{")
    patched = patches(
        "logging",
        prefix="snake.asymmetric.cli")

    with patched:
        code = cli.main(["run", str(path)])

    assert code == 2
    summary = json.loads(capsys.readouterr().out)
    assert summary["status"] == "input_error"
    assert summary["diagnostics"]["error"].startswith("Malformed JSON")


def test_cli_suite(capsys, patches, tmp_path):
    directory = tmp_path / "scenarios"
    shutil.copytree(SCENARIOS, directory)
    patched = patches(
        "logging",
        prefix="snake.asymmetric.cli")

    with patched:
        code = cli.main(["suite", str(directory), "--jobs", "3"])

    assert code == 1
    report = json.loads(capsys.readouterr().out)
    assert report["exit_code"] == 1
    assert list(report["scenarios"]) == sorted(
        p.name for p in SCENARIOS.glob("*.scenario.json"))
