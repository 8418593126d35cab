"""MCP server exposing the scenario runners."""

import asyncio

from mcp.server.fastmcp import Context, FastMCP

from snake.asymmetric.runner import ScenarioRunner, SuiteRunner
from snake.asymmetric.util.jsonfmt import dumps

mcp = FastMCP("Asymmetric")

# TOOLS


@mcp.tool()
async def run_scenario(ctx: Context, path: str) -> dict:
    """Run one scenario file

    Args:
        path: Path of a scenario JSON file

    Returns:
        A dictionary with the following structure:
        {
            "exit_code": int,
            "summary": str (summary JSON)
        }
    """
    result = await asyncio.to_thread(ScenarioRunner(path).run)
    await ctx.info(f"Scenario {path} exited with {result.exit_code}")
    return dict(exit_code=result.exit_code, summary=dumps(result.summary))


@mcp.tool()
async def run_suite(
        ctx: Context,
        path: str,
        jobs: int | None = None) -> dict:
    """Run every *.scenario.json file in a directory

    Args:
        path: Directory holding the scenario files
        jobs: Optional number of scenarios run concurrently

    Returns:
        A dictionary with the following structure:
        {
            "exit_code": int,
            "report": str (aggregate JSON)
        }
    """
    suite = await SuiteRunner(path, jobs).run()
    await ctx.info(f"Suite {path} exited with {suite.exit_code}")
    return dict(exit_code=suite.exit_code, report=dumps(suite.report))
