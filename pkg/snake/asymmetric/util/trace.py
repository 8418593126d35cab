"""Convergence traces as CSV."""

import csv
import pathlib

from snake.asymmetric.solvers import ConvergenceTrace
from snake.asymmetric.util.jsonfmt import format_float


def trace_header(dim: int) -> list[str]:
    return [
        "n",
        *(f"x{i}" for i in range(dim)),
        "d_fwd_step",
        "d_bwd_step",
        "bound"]


def trace_rows(trace: ConvergenceTrace) -> list[list[str]]:
    return [
        [str(row.n),
         *(format_float(float(c)) for c in row.point),
         format_float(row.d_fwd_step),
         format_float(row.d_bwd_step),
         "" if row.bound is None else format_float(row.bound)]
        for row in trace.rows]


def write_trace(
        path: pathlib.Path,
        trace: ConvergenceTrace,
        dim: int) -> None:
    """Write one row per update; the bound column is empty when the
    solver defines none."""
    with path.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(trace_header(dim))
        writer.writerows(trace_rows(trace))
