"""
Human-readable report lines followed by a ``# machine`` block of stable
``key=value`` lines. Runtimes only ever appear in the human part.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, List, Optional, Tuple

from bvslab.space import Point
from bvslab.scalar import format_scalar

MACHINE_HEADER = "# machine"


class Colors:
    green = "\x1b[32m"
    red = "\x1b[31m"
    yellow = "\x1b[33m"
    bold = "\x1b[1m"
    reset = "\x1b[0m"


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return format_scalar(value)
    if isinstance(value, Point):
        return value.label
    if value is None:
        return "none"
    if isinstance(value, (tuple, list)):
        return ",".join(format_value(item) for item in value)
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return str(value)


def format_points(points: Iterable[Point]) -> str:
    return "(" + ", ".join(point.label for point in points) + ")"


class Report:
    def __init__(self, title: str, color: bool = False) -> None:
        self.title = title
        self.color = color
        self.lines: List[str] = []
        self.machine: List[Tuple[str, str]] = []

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def status(self, passed: Optional[bool], text: str) -> None:
        """A line prefixed with PASS, FAIL or INFO."""
        if passed is None:
            tag, color = "INFO", Colors.yellow
        elif passed:
            tag, color = "PASS", Colors.green
        else:
            tag, color = "FAIL", Colors.red
        if self.color:
            tag = f"{color}{Colors.bold}{tag}{Colors.reset}"
        self.lines.append(f"[{tag}] {text}")

    def record(self, key: str, value: Any) -> None:
        self.machine.append((key, format_value(value)))

    def machine_block(self) -> str:
        return "\n".join([MACHINE_HEADER] + [f"{key}={value}" for key, value in self.machine])

    def render(self) -> str:
        parts = [self.title, *self.lines, "", self.machine_block()]
        return "\n".join(parts) + "\n"


def parse_machine_block(text: str) -> dict:
    """Read the ``key=value`` pairs back out of rendered report text."""
    _, found, block = text.partition(MACHINE_HEADER)
    if not found:
        return {}
    pairs = {}
    for line in block.strip().splitlines():
        key, sep, value = line.partition("=")
        if sep:
            pairs[key.strip()] = value.strip()
    return pairs
