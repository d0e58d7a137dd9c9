#!/usr/bin/env python3

"""CLI entrypoint for lower bounds on the size of cubature formulas."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from fibrature.lib.bounds import bound_reports, space_bound_reports
from fibrature.lib.cli_helpers import (
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    USAGE_ERRORS,
    add_common_arguments,
    configure_logger,
    input_paths,
    load_formula,
)
from fibrature.lib.config import RunConfig
from fibrature.lib.measures import (
    SpaceDescriptor,
    ball,
    complex_projective,
    corner_simplex,
    exponential_orthant,
    gaussian,
    jacobi_interval,
    simplex,
    sphere,
    trig_torus,
)

SPACE_BUILDERS = {
    "simplex": simplex,
    "corner_simplex": corner_simplex,
    "sphere": sphere,
    "ball": ball,
    "gaussian": gaussian,
    "exponential_orthant": exponential_orthant,
    "torus": trig_torus,
    "torus-an": lambda n: trig_torus(n, "an_root"),
    "cp": complex_projective,
    "interval": lambda n: jacobi_interval(0, 0),
}


def space_from_name(name: str, dim: int) -> SpaceDescriptor:
    if name not in SPACE_BUILDERS:
        raise ValueError(f"Unknown space {name!r}; choose from {sorted(SPACE_BUILDERS)}.")
    return SPACE_BUILDERS[name](dim)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Evaluate every lower bound that applies to a space and degree, or to a formula."
    )
    parser.add_argument("--formula", default=None, help="Formula JSON file, or catalog:<id>.")
    parser.add_argument(
        "--space",
        choices=sorted(SPACE_BUILDERS),
        default=None,
        help="Space to bound when no formula is given.",
    )
    parser.add_argument(
        "--dim",
        type=int,
        default=None,
        help="Dimension parameter of the space (coordinate count for spheres and balls).",
    )
    parser.add_argument(
        "--degree",
        type=int,
        default=None,
        help="Degree of the formulas (default: the formula's claimed degree).",
    )
    parser.add_argument(
        "--size",
        type=int,
        default=None,
        help="Formula size to compare against the bounds.",
    )
    parser.add_argument(
        "-o",
        "--output",
        default=None,
        help="Output table (TSV) (default: stdout).",
    )
    add_common_arguments(parser, "fibrature-bounds")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logger = configure_logger("fibrature.bounds", args.log_level)
    try:
        config = RunConfig(
            "bounds",
            inputs=input_paths(args.formula),
            output=Path(args.output).expanduser() if args.output else None,
        ).validate()
        if args.formula is not None:
            reports = bound_reports(load_formula(args.formula), args.degree)
        else:
            if args.space is None or args.dim is None or args.degree is None:
                raise ValueError("Pass --formula, or all of --space, --dim and --degree.")
            reports = space_bound_reports(space_from_name(args.space, args.dim), args.degree, args.size)
    except (ValueError, *USAGE_ERRORS) as exc:
        logger.error("Bound evaluation failed: %s", exc)
        return EXIT_USAGE

    table = pd.DataFrame([r.to_row() for r in reports])
    table.to_csv(config.output if config.output else sys.stdout, sep="\t", index=False)
    violated = [r.name for r in reports if not r.satisfied]
    if violated:
        logger.error("Formula is smaller than the %s bound(s).", ", ".join(violated))
        return EXIT_FAILURE
    logger.info("Evaluated %d bound(s).", len(reports))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
