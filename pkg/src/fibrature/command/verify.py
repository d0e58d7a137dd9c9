#!/usr/bin/env python3

"""CLI entrypoint for exact or bigfloat verification of a cubature formula."""

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
    add_arithmetic_arguments,
    add_common_arguments,
    configure_logger,
    input_paths,
    load_formula,
    write_json,
)
from fibrature.lib.config import RunConfig
from fibrature.lib.errors import ScalarModeError
from fibrature.lib.verify import verify


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Check that a formula integrates every monomial (or torus character) up to a degree."
    )
    parser.add_argument("formula", help="Formula JSON file, or catalog:<id>.")
    parser.add_argument(
        "--degree",
        type=int,
        default=None,
        help="Degree to verify (default: the formula's claimed degree).",
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=1,
        help="Threads used for the moment walk (default: 1).",
    )
    parser.add_argument(
        "--no-prune",
        action="store_true",
        help="Check every monomial even when the formula is certified symmetric.",
    )
    parser.add_argument(
        "--fast",
        action="store_true",
        help="Evaluate float mode in IEEE double with a relative tolerance.",
    )
    parser.add_argument(
        "-o",
        "--output",
        default=None,
        help="Report JSON (default: stdout).",
    )
    add_arithmetic_arguments(parser)
    add_common_arguments(parser, "fibrature-verify")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logger = configure_logger("fibrature.verify", args.log_level)
    try:
        config = RunConfig(
            "verify",
            inputs=input_paths(args.formula),
            output=Path(args.output).expanduser() if args.output else None,
            mode=args.mode,
            tol=args.tol,
            precision=args.precision,
            seed=args.seed,
            cap=args.cap,
            workers=args.workers,
        ).validate()
        formula = load_formula(args.formula)
        degree = args.degree if args.degree is not None else formula.claimed_degree
        if degree is None:
            raise ValueError("The formula claims no degree; pass --degree.")
        if config.mode == "exact" and not formula.is_exact:
            raise ScalarModeError("Exact verification needs exact data; pass --mode float.")
    except (ValueError, *USAGE_ERRORS) as exc:
        logger.error("Loading failed: %s", exc)
        return EXIT_USAGE

    try:
        report = verify(
            formula,
            degree,
            config.mode,
            config.tol if config.mode == "float" else None,
            precision=config.precision,
            workers=config.workers,
            prune=not args.no_prune,
            fast=args.fast,
            logger=logger,
        )
    except Exception as exc:  # pragma: no cover - CLI friendly failure.
        logger.error("Verification failed: %s", exc)
        return EXIT_FAILURE

    payload = {"formula": formula.provenance, "points": len(formula), **report.to_json()}
    write_json(payload, config.output)
    if not report.passed:
        logger.warning(
            "Degree %d not reached: first failure at degree %s.", degree, report.first_failing_degree()
        )
        return EXIT_FAILURE
    logger.info("Verified %d points at degree %d (%s).", len(formula), degree, config.mode)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
