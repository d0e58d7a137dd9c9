#!/usr/bin/env python3

"""CLI entrypoint for the reproduction table."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from fibrature.lib.cli_helpers import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, add_common_arguments, configure_logger
from fibrature.lib.config import RunConfig
from fibrature.lib.table import default_rows, reproduction_table


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Rebuild every quoted construction, compare point counts and verify degrees."
    )
    parser.add_argument(
        "--output",
        default=None,
        help="Output table (TSV) (default: stdout).",
    )
    parser.add_argument(
        "--full",
        action="store_true",
        help="Also verify the expensive rows (BW16, Leech, large sphere pipelines).",
    )
    parser.add_argument(
        "--only",
        nargs="+",
        default=None,
        help="Restrict to constructions whose name starts with one of these prefixes.",
    )
    add_common_arguments(parser, "fibrature-table")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logger = configure_logger("fibrature.table", args.log_level)
    config = RunConfig(
        "table",
        output=Path(args.output).expanduser() if args.output else None,
        extras={"full": args.full},
    ).validate()

    rows = None
    if args.only:
        rows = [r for r in default_rows() if r.construction.startswith(tuple(args.only))]
        if not rows:
            logger.error("No construction starts with %s.", ", ".join(args.only))
            return EXIT_USAGE
    try:
        table = reproduction_table(full=args.full, rows=rows, logger=logger)
    except Exception as exc:  # pragma: no cover - CLI friendly failure.
        logger.error("Reproduction failed: %s", exc)
        return EXIT_FAILURE

    table.to_csv(config.output if config.output else sys.stdout, sep="\t", index=False)
    mismatches = table.loc[~table["passed"], "construction"].tolist()
    if mismatches:
        logger.error("Rows not reproduced: %s", ", ".join(mismatches))
        return EXIT_FAILURE
    logger.info("All %d rows reproduced.", len(table))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
