"""Run configuration and package-wide defaults."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Optional, Tuple

DEFAULT_PRECISION_BITS = 256
MIN_PRECISION_BITS = 64
DEFAULT_FLOAT_TOL = 1e-10
DEFAULT_SEED = 7
DEFAULT_ORBIT_CAP = 10**7
DEFAULT_CLOSURE_CAP = 10**6
DEFAULT_EPSNET_SAMPLES = 100_000

@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand needs to know before it starts working."""

    subcommand: str
    inputs: Tuple[Path, ...] = ()
    output: Optional[Path] = None
    mode: str = "exact"
    tol: float = DEFAULT_FLOAT_TOL
    precision: int = DEFAULT_PRECISION_BITS
    seed: int = DEFAULT_SEED
    cap: int = DEFAULT_ORBIT_CAP
    workers: int = 1
    extras: Dict[str, object] = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        if self.mode not in ("exact", "float"):
            raise ValueError(f"Unknown arithmetic mode {self.mode!r}.")
        if self.precision < MIN_PRECISION_BITS:
            raise ValueError(
                f"Precision must be at least {MIN_PRECISION_BITS} bits, got {self.precision}."
            )
        if self.mode == "float" and Fraction(self.tol) < Fraction(1, 2 ** (self.precision - 16)):
            raise ValueError(
                f"Tolerance {self.tol:g} is below what {self.precision}-bit arithmetic can certify."
            )
        if self.tol <= 0:
            raise ValueError(f"Tolerance must be positive, got {self.tol:g}.")
        if self.cap < 1:
            raise ValueError(f"Cap must be positive, got {self.cap}.")
        if self.workers < 1:
            raise ValueError(f"Worker count must be positive, got {self.workers}.")
        for path in self.inputs:
            if not path.is_file():
                raise FileNotFoundError(f"Input file {path} does not exist.")
        return self


__all__ = [
    "DEFAULT_CLOSURE_CAP",
    "DEFAULT_EPSNET_SAMPLES",
    "DEFAULT_FLOAT_TOL",
    "DEFAULT_ORBIT_CAP",
    "DEFAULT_PRECISION_BITS",
    "DEFAULT_SEED",
    "MIN_PRECISION_BITS",
    "RunConfig",
]
