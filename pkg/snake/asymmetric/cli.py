"""Command line entry point."""

import argparse
import asyncio
import logging
import sys
from collections.abc import Sequence

from snake.asymmetric.runner import ScenarioRunner, SuiteRunner
from snake.asymmetric.util.jsonfmt import dumps

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {number}")
    return number


def parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snake-asymmetric",
        description=(
            "Run fixed-point and geometry scenarios on asymmetric "
            "spaces."))
    parser.add_argument(
        "--log-level",
        choices=LOG_LEVELS,
        default="WARNING",
        help="Log level for messages on stderr")
    commands = parser.add_subparsers(dest="command", required=True)
    run = commands.add_parser("run", help="Run one scenario file")
    run.add_argument("file")
    suite = commands.add_parser(
        "suite",
        help="Run every *.scenario.json file in a directory")
    suite.add_argument("dir")
    suite.add_argument(
        "--jobs",
        type=positive_int,
        default=None,
        help="Scenarios run concurrently (default: all)")
    commands.add_parser("serve", help="Serve the runners as MCP tools")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "run":
        result = ScenarioRunner(args.file).run()
        print(dumps(result.summary))
        return result.exit_code
    if args.command == "suite":
        suite = asyncio.run(SuiteRunner(args.dir, args.jobs).run())
        print(dumps(suite.report))
        return suite.exit_code
    from snake.asymmetric.server import mcp
    mcp.run()
    return 0
