"""
The small command framework the ``cogs/`` modules are written against.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from typing import Any, Callable, Dict, Sequence, Tuple

from bvslab.report import Report

Argument = Tuple[Tuple[str, ...], Dict[str, Any]]


def argument(*flags: str, **options: Any) -> Argument:
    return flags, options


def command(name: str, description: str, arguments: Sequence[Argument] = ()) -> Callable:
    """
    Mark a cog method as a subcommand.

    :param name: The subcommand name on the command line.
    :param description: The help text shown by ``--help``.
    :param arguments: ``argument(...)`` declarations forwarded to argparse.
    """

    def decorator(func: Callable) -> Callable:
        func.__command__ = (name, description, tuple(arguments))
        return func

    return decorator


@dataclass
class Context:
    lab: Any
    command: str
    args: argparse.Namespace
    report: Report


class Cog:
    qualified_name = "cog"

    def __init_subclass__(cls, name: str = "", **kwargs: Any) -> None:
        super().__init_subclass__(**kwargs)
        cls.qualified_name = name or cls.__name__.lower()

    def __init__(self, lab: Any) -> None:
        self.lab = lab
