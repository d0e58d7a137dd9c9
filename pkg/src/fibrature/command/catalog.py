#!/usr/bin/env python3

"""CLI entrypoint for listing and emitting catalogued formulas and line sets."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from fibrature.lib.catalog import catalog_table, named_formula
from fibrature.lib.cli_helpers import (
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    USAGE_ERRORS,
    add_common_arguments,
    configure_logger,
    load_vector_set,
    write_json,
)
from fibrature.lib.config import RunConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="List catalogued formulas or write one as JSON.")
    add_common_arguments(parser, "fibrature-catalog")
    sub = parser.add_subparsers(dest="action", required=True)

    listing = sub.add_parser("list", help="Write the catalog as a TSV table.")
    listing.add_argument(
        "-o",
        "--output",
        default=None,
        help="Output table (TSV) (default: stdout).",
    )
    listing.add_argument(
        "--no-build",
        action="store_true",
        help="List the entries without building them for point counts.",
    )

    emit = sub.add_parser("emit", help="Write one catalog entry as JSON.")
    emit.add_argument("id", help="Catalog id, or lines:<set> for a complex line set.")
    emit.add_argument(
        "-o",
        "--output",
        default=None,
        help="Output JSON (default: stdout).",
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logger = configure_logger("fibrature.catalog", args.log_level)
    config = RunConfig(
        "catalog",
        output=Path(args.output).expanduser() if args.output else None,
        extras={"action": args.action},
    ).validate()

    if args.action == "list":
        try:
            table = catalog_table(build=not args.no_build)
        except Exception as exc:  # pragma: no cover - CLI friendly failure.
            logger.error("Catalog listing failed: %s", exc)
            return EXIT_FAILURE
        table.to_csv(config.output if config.output else sys.stdout, sep="\t", index=False)
        logger.info("Catalog lists %d entries.", len(table))
        return EXIT_OK

    try:
        if args.id.startswith("lines:"):
            payload = load_vector_set(args.id).to_json()
        else:
            payload = named_formula(args.id, logger=logger).to_json()
    except (KeyError, *USAGE_ERRORS) as exc:
        logger.error("Catalog lookup failed: %s", exc)
        return EXIT_USAGE
    write_json(payload, config.output)
    logger.info("Catalog entry %s written.", args.id)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
