#!/usr/bin/env python3

"""CLI entrypoint for building cubature formulas, torus designs and line sets."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from time import perf_counter
from typing import Any, Dict, Optional, Sequence

from fibrature.lib.cli_helpers import (
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    add_common_arguments,
    configure_logger,
    write_json,
)
from fibrature.lib.config import DEFAULT_PRECISION_BITS, RunConfig
from fibrature.lib.designs import hadamard_simplex_formula
from fibrature.lib.fibration import ball4_7pt, gauss4_7pt, s3_family, sphere7_pipeline
from fibrature.lib.roots import mub_design
from fibrature.lib.torus import (
    craig_lattice_an,
    craig_lattice_zn,
    hex_design,
    lattice_design,
    noskov_design,
    subgroup_points,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Build a named construction and write it as JSON.")
    parser.add_argument(
        "-o",
        "--output",
        default=None,
        help="Output JSON (default: stdout).",
    )
    parser.add_argument(
        "--precision",
        type=int,
        default=DEFAULT_PRECISION_BITS,
        help=f"Bigfloat precision in bits (default: {DEFAULT_PRECISION_BITS}).",
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=1,
        help="Threads used for the fiber products (default: 1).",
    )
    add_common_arguments(parser, "fibrature-construct")
    sub = parser.add_subparsers(dest="construction", required=True)

    sphere7 = sub.add_parser("sphere7", help="7-formula on S^(2n-1) with about 4n^4 points.")
    sphere7.add_argument("--n", type=int, required=True, help="Complex dimension (a Hadamard order).")

    s3 = sub.add_parser("s3", help="(2s+1)-formula on S^3.")
    s3.add_argument("--s", type=int, required=True, help="Degree of the base rule on the interval.")

    sub.add_parser("ball4-7pt", help="PI 7-cubature on the 4-ball with 64 points.")
    sub.add_parser("gauss4-7pt", help="Gaussian 7-cubature on R^4 with 190 points.")

    craig = sub.add_parser("torus-craig", help="Craig lattice design on a torus.")
    craig.add_argument("--n", type=int, required=True, help="Torus dimension.")
    craig.add_argument("--t", type=int, required=True, help="Number of power-sum constraints.")
    craig.add_argument("--p", type=int, required=True, help="Prime modulus.")
    craig.add_argument(
        "--root",
        choices=("zn", "an"),
        default="zn",
        help="Character lattice Z^n (l1 norm) or A_n (root norm) (default: zn).",
    )
    craig.add_argument("--boost", action="store_true", help="Add the even-sum boost (Z^n only).")
    craig.add_argument(
        "--degree",
        type=int,
        default=None,
        help="Claimed degree (default: computed from the minimum distance).",
    )

    noskov = sub.add_parser("noskov", help="Noskov design on T^2.")
    noskov.add_argument("--s", type=int, required=True, help="Design parameter s >= 1.")
    noskov.add_argument(
        "--parity",
        choices=("even", "odd"),
        default="even",
        help="2s^2 points of degree 2s-1, or s^2+(s+1)^2 of degree 2s (default: even).",
    )

    hexagonal = sub.add_parser("hex", help="Hexagonal design on the A_2 torus.")
    hexagonal.add_argument("--d", type=int, required=True, help="Minimum distance d >= 2.")

    hadamard = sub.add_parser("hadamard-simplex", help="PB 3-cubature on the (n-1)-simplex.")
    hadamard.add_argument("--n", type=int, required=True, help="Hadamard order.")

    mub = sub.add_parser("mub", help="q^2+q lines in C^q forming a projective 2-design.")
    mub.add_argument("--q", type=int, required=True, help="Odd prime.")
    return parser


def _craig(args: argparse.Namespace) -> Any:
    if args.root == "an":
        lattice = craig_lattice_an(args.n, args.t, args.p)
    else:
        lattice = craig_lattice_zn(args.n, args.t, args.p, boost=args.boost)
    provenance = f"craig {args.root} n={args.n} t={args.t} p={args.p}"
    if args.degree is None:
        return lattice_design(lattice, provenance=provenance)
    return subgroup_points(lattice, degree=args.degree, provenance=provenance)


def build(args: argparse.Namespace, logger: Any) -> Dict[str, Any]:
    """Run the selected construction and return its JSON document."""

    name = args.construction
    if name == "sphere7":
        return sphere7_pipeline(args.n, precision=args.precision, workers=args.workers, logger=logger).to_json()
    if name == "s3":
        return s3_family(args.s, precision=args.precision, logger=logger).to_json()
    if name == "ball4-7pt":
        return ball4_7pt(precision=args.precision, logger=logger).to_json()
    if name == "gauss4-7pt":
        return gauss4_7pt(precision=args.precision, logger=logger).to_json()
    if name == "torus-craig":
        design = _craig(args)
    elif name == "noskov":
        design = noskov_design(args.s, args.parity)
    elif name == "hex":
        design = hex_design(args.d)
    elif name == "hadamard-simplex":
        return hadamard_simplex_formula(args.n).to_json()
    elif name == "mub":
        return mub_design(args.q, precision=args.precision).to_json()
    else:  # pragma: no cover - argparse restricts the choices.
        raise ValueError(f"Unknown construction {name!r}.")
    payload = design.formula.to_json()
    if design.lattice is not None:
        payload["lattice"] = design.lattice.to_json()
    return payload


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logger = configure_logger("fibrature.construct", args.log_level)
    try:
        config = RunConfig(
            "construct",
            output=Path(args.output).expanduser() if args.output else None,
            precision=args.precision,
            workers=args.workers,
            extras={"construction": args.construction},
        ).validate()
    except ValueError as exc:
        logger.error("Configuration failed: %s", exc)
        return EXIT_USAGE

    t0 = perf_counter()
    try:
        payload = build(args, logger)
    except ValueError as exc:
        logger.error("Construction %s failed: %s", args.construction, exc)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - CLI friendly failure.
        logger.error("Construction %s failed: %s", args.construction, exc)
        return EXIT_FAILURE

    write_json(payload, config.output)
    logger.info("Construction %s finished in %.2f s.", args.construction, perf_counter() - t0)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
