#!/usr/bin/env python3

"""CLI entrypoint for the sharpness, covering and Christoffel checks."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from fibrature.lib.bounds import christoffel_scaling, epsnet_check, sharp_check
from fibrature.lib.cli_helpers import (
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    USAGE_ERRORS,
    add_common_arguments,
    configure_logger,
    input_paths,
    load_formula,
    write_json,
)
from fibrature.lib.config import (
    DEFAULT_EPSNET_SAMPLES,
    DEFAULT_FLOAT_TOL,
    DEFAULT_PRECISION_BITS,
    DEFAULT_SEED,
    RunConfig,
)
from fibrature.lib.errors import PreconditionError


def _add_formula_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--formula", required=True, help="Formula JSON file, or catalog:<id>.")
    parser.add_argument("--degree", type=int, required=True, help="Degree the formula is checked at.")
    parser.add_argument(
        "--tol",
        type=float,
        default=DEFAULT_FLOAT_TOL,
        help=f"Tolerance for the degree precondition and interval ends (default: {DEFAULT_FLOAT_TOL:g}).",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Run the Gauss-interval, epsilon-net or Christoffel checks.")
    parser.add_argument(
        "-o",
        "--output",
        default=None,
        help="Output file: JSON for sharp/epsnet, TSV for christoffel (default: stdout).",
    )
    parser.add_argument(
        "--precision",
        type=int,
        default=DEFAULT_PRECISION_BITS,
        help=f"Bigfloat precision in bits (default: {DEFAULT_PRECISION_BITS}).",
    )
    add_common_arguments(parser, "fibrature-check")
    sub = parser.add_subparsers(dest="check", required=True)

    sharp = sub.add_parser("sharp", help="Every Gauss interval holds a node; tail weights stay below w_1, w_m.")
    _add_formula_arguments(sharp)

    epsnet = sub.add_parser("epsnet", help="Nodes of a positive simplex formula form an epsilon-net.")
    _add_formula_arguments(epsnet)
    epsnet.add_argument(
        "--samples",
        type=int,
        default=DEFAULT_EPSNET_SAMPLES,
        help=f"Quasi-random sample size (default: {DEFAULT_EPSNET_SAMPLES}).",
    )
    epsnet.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help=f"Scrambling seed (default: {DEFAULT_SEED}).",
    )

    christoffel = sub.add_parser("christoffel", help="Decay of the extreme Jacobi(n-1, 0) Christoffel weight.")
    christoffel.add_argument("--n", type=int, required=True, help="Simplex dimension.")
    christoffel.add_argument(
        "--t",
        type=int,
        nargs="+",
        default=[8, 16, 32, 64],
        help="Increasing degrees (default: 8 16 32 64).",
    )
    return parser


def run(args: argparse.Namespace, config: RunConfig, logger: Any) -> int:
    if args.check == "christoffel":
        fit = christoffel_scaling(args.n, args.t, precision=config.precision, logger=logger)
        fit.table.to_csv(config.output if config.output else sys.stdout, sep="\t", index=False)
        logger.info(
            "Christoffel slope %.4f (%.4f against t) for the expected %d.",
            fit.slope,
            fit.plain_slope,
            -2 * args.n,
        )
        return EXIT_OK

    formula = load_formula(args.formula)
    payload: Dict[str, Any]
    if args.check == "sharp":
        report = sharp_check(formula, args.degree, tol=config.tol, precision=config.precision, logger=logger)
        payload, passed = report.to_json(), report.passed
        for violation in report.violations:
            logger.warning("Sharpness violation: %s", violation)
    else:
        net = epsnet_check(
            formula,
            args.degree,
            args.samples,
            config.seed,
            tol=config.tol,
            precision=config.precision,
            logger=logger,
        )
        payload, passed = net.to_json(), net.covered
    write_json(payload, config.output)
    return EXIT_OK if passed else EXIT_FAILURE


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logger = configure_logger("fibrature.check", args.log_level)
    try:
        config = RunConfig(
            "check",
            inputs=input_paths(getattr(args, "formula", None)),
            output=Path(args.output).expanduser() if args.output else None,
            mode="float",
            tol=getattr(args, "tol", DEFAULT_FLOAT_TOL),
            precision=args.precision,
            seed=getattr(args, "seed", DEFAULT_SEED),
            extras={"check": args.check},
        ).validate()
    except (ValueError, *USAGE_ERRORS) as exc:
        logger.error("Configuration failed: %s", exc)
        return EXIT_USAGE

    try:
        return run(args, config, logger)
    except PreconditionError as exc:
        logger.error("Check %s failed: %s", args.check, exc)
        return EXIT_FAILURE
    except (ValueError, *USAGE_ERRORS) as exc:
        logger.error("Check %s failed: %s", args.check, exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
