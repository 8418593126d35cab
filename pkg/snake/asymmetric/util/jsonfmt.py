"""JSON rendering with floats at 17 significant digits."""

import json
import math
from typing import Any

import numpy as np


def format_float(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    text = format(value, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


class JsonFormatter:
    """Deterministic JSON text for summaries and suite reports.

    Keys keep insertion order; floats are printed with
    ``format_float``.
    """

    def __init__(self, indent: int = 2) -> None:
        self.indent = indent

    def dumps(self, value: Any) -> str:
        return self._encode(value, 0)

    def _encode(self, value: Any, level: int) -> str:
        if isinstance(value, np.ndarray):
            value = value.tolist()
        elif isinstance(value, np.generic):
            value = value.item()
        if value is None or isinstance(value, (bool, str)):
            return json.dumps(value)
        if isinstance(value, int):
            return str(value)
        if isinstance(value, float):
            return format_float(value)
        if isinstance(value, dict):
            return self._block(
                "{", "}",
                [f"{json.dumps(str(k))}: {self._encode(v, level + 1)}"
                 for k, v in value.items()],
                level)
        if isinstance(value, (list, tuple)):
            return self._block(
                "[", "]",
                [self._encode(v, level + 1) for v in value],
                level)
        raise TypeError(
            f"Object of type {type(value).__name__} is not serializable")

    def _block(
            self,
            opening: str,
            closing: str,
            items: list[str],
            level: int) -> str:
        if not items:
            return opening + closing
        inner = "\n" + " " * (self.indent * (level + 1))
        outer = "\n" + " " * (self.indent * level)
        return (
            opening
            + inner
            + ("," + inner).join(items)
            + outer
            + closing)


def dumps(value: Any, indent: int = 2) -> str:
    return JsonFormatter(indent).dumps(value)
