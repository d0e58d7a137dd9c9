#!/usr/bin/env python3

"""``fibrature <verb> ...`` dispatcher over the per-verb entrypoints."""

from __future__ import annotations

import sys
from typing import Callable, Dict, Optional, Sequence

from fibrature import __version__
from fibrature.command import bounds, catalog, check, construct, lift, table, verify
from fibrature.lib.cli_helpers import EXIT_OK, EXIT_USAGE

COMMANDS: Dict[str, Callable[[Optional[Sequence[str]]], int]] = {
    "verify": verify.main,
    "construct": construct.main,
    "catalog": catalog.main,
    "bounds": bounds.main,
    "check": check.main,
    "lift": lift.main,
    "table": table.main,
}

USAGE = "usage: fibrature {" + ",".join(COMMANDS) + "} ...\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    if not args or args[0] in ("-h", "--help"):
        sys.stdout.write(USAGE)
        return EXIT_OK if args else EXIT_USAGE
    if args[0] in ("-v", "--version"):
        sys.stdout.write(f"fibrature {__version__}\n")
        return EXIT_OK
    if args[0] not in COMMANDS:
        sys.stderr.write(USAGE + f"fibrature: unknown command {args[0]!r}\n")
        return EXIT_USAGE
    return COMMANDS[args[0]](args[1:])


if __name__ == "__main__":
    sys.exit(main())
