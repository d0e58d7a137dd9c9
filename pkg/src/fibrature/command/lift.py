#!/usr/bin/env python3

"""CLI entrypoint for lifting projective designs to sphere formulas."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from fibrature.lib.cli_helpers import (
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    USAGE_ERRORS,
    add_common_arguments,
    configure_logger,
    input_paths,
    load_vector_set,
    write_json,
)
from fibrature.lib.config import DEFAULT_PRECISION_BITS, RunConfig
from fibrature.lib.fibration import hopf_lift, hopf_lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Lift a weighted line set in C^n to a formula on S^(2n-1).")
    add_common_arguments(parser, "fibrature-lift")
    sub = parser.add_subparsers(dest="lift", required=True)

    hopf = sub.add_parser("hopf", help="Multiply every line by the 2t+2 phases of unit modulus.")
    hopf.add_argument("--t", type=int, required=True, help="Projective design strength t.")
    hopf.add_argument(
        "--lines",
        "--in",
        dest="lines",
        required=True,
        help="Line set JSON file, or lines:<set>.",
    )
    hopf.add_argument(
        "--dedup",
        action="store_true",
        help="Merge vectors spanning the same line before lifting.",
    )
    hopf.add_argument(
        "--precision",
        type=int,
        default=DEFAULT_PRECISION_BITS,
        help=f"Bigfloat precision in bits (default: {DEFAULT_PRECISION_BITS}).",
    )
    hopf.add_argument(
        "-o",
        "--output",
        default=None,
        help="Output formula JSON (default: stdout).",
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logger = configure_logger("fibrature.lift", args.log_level)
    try:
        config = RunConfig(
            "lift",
            inputs=input_paths(args.lines),
            output=Path(args.output).expanduser() if args.output else None,
            precision=args.precision,
            extras={"t": args.t},
        ).validate()
        lines = load_vector_set(args.lines)
    except (ValueError, KeyError, *USAGE_ERRORS) as exc:
        logger.error("Loading failed: %s", exc)
        return EXIT_USAGE

    if args.dedup:
        lines = hopf_lines(lines)
    try:
        formula = hopf_lift(lines, args.t, precision=config.precision, logger=logger)
    except Exception as exc:  # pragma: no cover - CLI friendly failure.
        logger.error("Hopf lift failed: %s", exc)
        return EXIT_FAILURE

    write_json(formula.to_json(), config.output)
    logger.info("Lifted %d lines to %d points on %s.", len(lines), len(formula), formula.space.label)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
