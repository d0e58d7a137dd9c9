"""Helper utilities shared by CLI entrypoints."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from fibrature import __version__
from fibrature.lib.catalog import named_formula
from fibrature.lib.config import (
    DEFAULT_FLOAT_TOL,
    DEFAULT_ORBIT_CAP,
    DEFAULT_PRECISION_BITS,
    DEFAULT_SEED,
)
from fibrature.lib.errors import FormulaFormatError, UnavailableCatalogIdError, UnknownCatalogIdError
from fibrature.lib.formula import Formula
from fibrature.lib.roots import ComplexVectorSet, named_vector_set

LOG_FORMAT = "[%(asctime)s] %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
LOG_LEVEL_CHOICES: tuple[str, ...] = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# Failures that come from bad input rather than bad mathematics.
USAGE_ERRORS = (FormulaFormatError, OSError, UnknownCatalogIdError, UnavailableCatalogIdError)


def configure_logger(name: str, level: str) -> logging.Logger:
    """Configure and return a logger that writes to stdout."""

    numeric_level = getattr(logging, level.upper())
    logger = logging.getLogger(name)
    logger.handlers.clear()
    logger.setLevel(numeric_level)

    handler = logging.StreamHandler(sys.stdout)
    handler.setLevel(numeric_level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))

    logger.addHandler(handler)
    logger.propagate = False
    return logger


def add_common_arguments(parser: argparse.ArgumentParser, prog: str) -> None:
    """Attach --log-level and --version, the flags every command carries."""

    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=LOG_LEVEL_CHOICES,
        help="Logging verbosity (default: INFO).",
    )
    parser.add_argument(
        "-v",
        "--version",
        action="version",
        version=f"{prog} {__version__}",
    )


def add_arithmetic_arguments(parser: argparse.ArgumentParser, *, default_mode: str = "exact") -> None:
    parser.add_argument(
        "--mode",
        choices=("exact", "float"),
        default=default_mode,
        help=f"Arithmetic used for verification (default: {default_mode}).",
    )
    parser.add_argument(
        "--tol",
        type=float,
        default=DEFAULT_FLOAT_TOL,
        help=f"Absolute residual tolerance in float mode (default: {DEFAULT_FLOAT_TOL:g}).",
    )
    parser.add_argument(
        "--precision",
        type=int,
        default=DEFAULT_PRECISION_BITS,
        help=f"Bigfloat precision in bits (default: {DEFAULT_PRECISION_BITS}).",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help=f"Seed for sampled checks (default: {DEFAULT_SEED}).",
    )
    parser.add_argument(
        "--cap",
        type=int,
        default=DEFAULT_ORBIT_CAP,
        help=f"Cap on orbit sizes and search radii (default: {DEFAULT_ORBIT_CAP}).",
    )


def read_json(path: Path) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise FormulaFormatError(f"{path} is not valid JSON: {exc}") from exc


def load_formula(source: str) -> Formula:
    """A formula from ``catalog:<id>`` or from a JSON file."""

    if source.startswith("catalog:"):
        return named_formula(source.split(":", 1)[1])
    return Formula.from_json(read_json(Path(source).expanduser()))


def load_vector_set(source: str) -> ComplexVectorSet:
    """A complex line set from ``lines:<set>`` or from a JSON file."""

    if source.startswith("lines:"):
        return named_vector_set(source.split(":", 1)[1])
    return ComplexVectorSet.from_json(read_json(Path(source).expanduser()))


def input_paths(*sources: str | None) -> tuple[Path, ...]:
    """File arguments that must exist before work starts; named sources are skipped."""

    return tuple(
        Path(s).expanduser() for s in sources if s is not None and not s.startswith(("catalog:", "lines:"))
    )


def write_json(payload: Any, path: Path | None) -> None:
    """Write JSON to ``path``, or to stdout when no path is given."""

    text = json.dumps(payload, indent=1)
    if path is None:
        sys.stdout.write(text + "\n")
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + "\n", encoding="utf-8")


__all__ = [
    "EXIT_FAILURE",
    "EXIT_OK",
    "EXIT_USAGE",
    "LOG_LEVEL_CHOICES",
    "USAGE_ERRORS",
    "add_arithmetic_arguments",
    "add_common_arguments",
    "configure_logger",
    "input_paths",
    "load_formula",
    "load_vector_set",
    "read_json",
    "write_json",
]
