"""
Description:
🧮 An exact-rational laboratory for b_v(s)-metric spaces: axioms, contractive
conditions, Picard iteration and the escape construction, driven from the
command line.

Version: 1.0.0
"""

import argparse
import importlib
import json
import logging
import os
import platform
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from dotenv import load_dotenv

from bvslab.commands import Context
from bvslab.corpus import default_corpus_dir
from bvslab.dsl import build_map, build_space, parse_map_spec, parse_space_spec
from bvslab.errors import BvsError, DslSyntaxError, MalformedTable, UnknownExample
from bvslab.report import Report
from bvslab.scalar import parse_scalar
from bvslab.space import (
    FiniteSpace,
    GeneratedSpace,
    Point,
    SelfMap,
    Space,
    make_finite_space,
    parse_selector,
    sample_of,
    select_points,
    truncate,
)

load_dotenv()


class LoggingFormatter(logging.Formatter):
    # Colors
    black = "\x1b[30m"
    red = "\x1b[31m"
    green = "\x1b[32m"
    yellow = "\x1b[33m"
    blue = "\x1b[34m"
    gray = "\x1b[38m"
    # Styles
    reset = "\x1b[0m"
    bold = "\x1b[1m"

    COLORS = {
        logging.DEBUG: gray + bold,
        logging.INFO: blue + bold,
        logging.WARNING: yellow + bold,
        logging.ERROR: red,
        logging.CRITICAL: red + bold,
    }

    def __init__(self, color: bool = True) -> None:
        super().__init__()
        self.color = color

    def format(self, record):
        log_color = self.COLORS[record.levelno]
        format = "(black){asctime}(reset) (levelcolor){levelname:<8}(reset) (green){name}(reset) {message}"
        format = format.replace("(black)", self.black + self.bold if self.color else "")
        format = format.replace("(reset)", self.reset if self.color else "")
        format = format.replace("(levelcolor)", log_color if self.color else "")
        format = format.replace("(green)", self.green + self.bold if self.color else "")
        formatter = logging.Formatter(format, "%Y-%m-%d %H:%M:%S", style="{")
        return formatter.format(record)


def _read_table_document(source: str, *keys: str) -> Dict[str, Any]:
    with open(source, encoding="utf-8") as file:
        document = json.load(file)
    if not isinstance(document, dict):
        raise MalformedTable(f"{source} must hold a JSON object")
    missing = [key for key in keys if key not in document]
    if missing:
        raise MalformedTable(f"{source} is missing " + ", ".join(repr(key) for key in missing))
    return document


def _env_flag(key: str, default: bool = False) -> bool:
    """Parse boolean environment variable."""
    value = os.getenv(key)
    if value is None:
        return default
    return value.strip().lower() in ("true", "1", "yes", "on")


logger = logging.getLogger("bvslab")
LOG_LEVEL = os.getenv("BVSLAB_LOG_LEVEL", "WARNING").upper()
logger.setLevel(LOG_LEVEL)
logger.propagate = False

# Console handler; standard output is kept for reports.
console_handler = logging.StreamHandler(sys.stderr)
console_handler.setFormatter(LoggingFormatter(color=_env_flag("BVSLAB_COLOR", True)))
logger.addHandler(console_handler)
# File handler
if os.getenv("BVSLAB_LOG_FILE"):
    file_handler = logging.FileHandler(filename=os.getenv("BVSLAB_LOG_FILE"), encoding="utf-8", mode="w")
    file_handler_formatter = logging.Formatter(
        "[{asctime}] [{levelname:<8}] {name}: {message}", "%Y-%m-%d %H:%M:%S", style="{"
    )
    file_handler.setFormatter(file_handler_formatter)
    logger.addHandler(file_handler)


class Lab:
    def __init__(self) -> None:
        """
        Shared state for every cog: the logger, configuration read from the
        environment and the argument parser the cogs register into.

        For example, the logger is available using the following code:
        - self.logger # In this class
        - self.lab.logger # In cogs
        """
        self.logger = logger
        self.corpus_dir = default_corpus_dir()
        self.color = _env_flag("BVSLAB_COLOR", True)
        self.default_budget = self._env_int("BVSLAB_DEFAULT_BUDGET", 40)
        self.parser = argparse.ArgumentParser(
            prog="bvslab",
            description="Exact checks for b_v(s)-metric spaces and self-maps.",
        )
        self.parser.add_argument("-v", "--verbose", action="store_true", help="log progress at INFO level")
        self.subparsers = self.parser.add_subparsers(dest="command", metavar="COMMAND")
        self.commands: Dict[str, Callable[[Context], int]] = {}

    def _env_int(self, key: str, default: int) -> int:
        value = os.getenv(key)
        if not value:
            return default
        try:
            return int(value)
        except ValueError:
            self.logger.warning("Ignoring invalid integer in %s: %s", key, value)
            return default

    def add_cog(self, cog: Any) -> None:
        registered = []
        for attribute in dir(cog):
            handler = getattr(cog, attribute)
            marker = getattr(handler, "__command__", None)
            if marker is None:
                continue
            name, description, arguments = marker
            subparser = self.subparsers.add_parser(name, help=description, description=description)
            for flags, options in arguments:
                subparser.add_argument(*flags, **options)
            self.commands[name] = handler
            registered.append(name)
        self.logger.info(f"Registered cog '{cog.qualified_name}': {', '.join(registered)}")

    def load_cogs(self) -> None:
        """
        Import every module in ``cogs/`` and let it register its commands.
        """
        for file in sorted(os.listdir(f"{os.path.realpath(os.path.dirname(__file__))}/cogs")):
            if file.endswith(".py") and not file.startswith("_"):
                extension = file[:-3]
                try:
                    module = importlib.import_module(f"cogs.{extension}")
                    module.setup(self)
                    self.logger.info(f"Loaded extension '{extension}'")
                except Exception as e:
                    exception = f"{type(e).__name__}: {e}"
                    self.logger.error(f"Failed to load extension {extension}\n{exception}")

    # Resolution of --space and --map values

    def _corpus_file(self, name: str, suffix: str) -> Optional[str]:
        path = os.path.join(self.corpus_dir, name + suffix)
        return path if os.path.isfile(path) else None

    def resolve_space(self, text: str) -> Tuple[Space, List[Point]]:
        """
        Resolve ``NAME``, ``NAME@SELECTOR``, a ``.space`` path or a ``.json`` table.

        :return: The space and the points a check should run over.
        """
        source, _, selector = text.partition("@")
        if source.endswith(".json") and os.path.isfile(source):
            document = _read_table_document(source, "labels", "table")
            space = make_finite_space(document["labels"], document["table"], name=os.path.basename(source))
            return space, list(space.points)
        path = source if os.path.isfile(source) else self._corpus_file(source, ".space")
        if path is None:
            raise UnknownExample(source)
        with open(path, encoding="utf-8") as file:
            generated = build_space(parse_space_spec(file.read()))
        points = select_points(generated, parse_selector(selector)) if selector else sample_of(generated)
        return generated, points

    def resolve_finite(self, text: str) -> FiniteSpace:
        space, points = self.resolve_space(text)
        if isinstance(space, FiniteSpace):
            return space
        return truncate(space, points)

    def resolve_map(self, text: Optional[str], space_text: str, space: Space) -> SelfMap:
        source = text or space_text.partition("@")[0]
        if source.endswith(".json") and os.path.isfile(source):
            if not isinstance(space, FiniteSpace):
                raise BvsError("a table map needs a table space")
            document = _read_table_document(source, "table")
            table = {space.point(key): space.point(value) for key, value in document["table"].items()}
            return SelfMap.from_table(document.get("name", os.path.basename(source)), table)
        path = source if source.endswith(".map") and os.path.isfile(source) else self._corpus_file(source, ".map")
        if path is None:
            raise UnknownExample(source)
        if not isinstance(space, GeneratedSpace):
            raise BvsError("a piecewise map needs a generated space")
        with open(path, encoding="utf-8") as file:
            return build_map(parse_map_spec(file.read()), space)

    def resolve_point(self, space: Space, text: str) -> Point:
        if isinstance(space, FiniteSpace):
            return space.point(text)
        return space.point_for_value(parse_scalar(text))

    # Dispatch

    def on_command_completion(self, context: Context, status: int) -> None:
        self.logger.info(f"Executed {context.command} command with exit status {status}")

    def on_command_error(self, context: Optional[Context], error: Exception) -> int:
        """
        Turn a failed command into a message on standard error and exit status 2.

        :param context: The context of the command that failed executing.
        :param error: The error that has been faced.
        """
        if isinstance(error, DslSyntaxError):
            for diagnostic in error.diagnostics:
                print(f"error: {diagnostic}", file=sys.stderr)
            return 2
        elif isinstance(error, BvsError):
            print(f"error: {type(error).__name__}: {error}", file=sys.stderr)
            if context is not None:
                self.logger.debug(f"{context.command} failed", exc_info=error)
            return 2
        elif isinstance(error, (OSError, json.JSONDecodeError)):
            print(f"error: {type(error).__name__}: {error}", file=sys.stderr)
            return 2
        else:
            raise error

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as exit:
            return int(exit.code or 0)
        self.logger.setLevel(logging.INFO if args.verbose else LOG_LEVEL)
        if not args.command:
            self.parser.print_usage(sys.stderr)
            return 2
        self.logger.info(f"Python version: {platform.python_version()}")
        color = self.color and sys.stdout.isatty()
        context = Context(self, args.command, args, Report(f"bvslab {args.command}", color=color))
        try:
            status = self.commands[args.command](context)
        except Exception as error:
            return self.on_command_error(context, error)
        sys.stdout.write(context.report.render())
        self.on_command_completion(context, status)
        return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    lab = Lab()
    lab.load_cogs()
    return lab.run(argv)


if __name__ == "__main__":
    sys.exit(main())
