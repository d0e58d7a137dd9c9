"""Integration domains and their exact moment oracles.

Every measure is normalized to total mass one. Simplex points use ``n + 1``
barycentric coordinates; the corner simplex ``{x >= 0, sum x <= 1}`` uses
``n``. Torus points are written in turns, so a coordinate ``u`` stands for
the angle ``2*pi*u``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from fibrature.lib.errors import FormulaFormatError, UnsupportedMomentError
from fibrature.lib.exact import ExponentVector

SPACE_KINDS: Tuple[str, ...] = (
    "simplex",
    "corner_simplex",
    "sphere",
    "ball",
    "trig_torus",
    "gaussian",
    "exponential_orthant",
    "jacobi_interval",
    "tabulated_interval",
    "complex_projective",
)
TORUS_NORMS: Tuple[str, ...] = ("l1", "an_root")

# Spaces whose moments are invariant under permuting coordinates.
PERMUTATION_INVARIANT = frozenset(
    {"simplex", "corner_simplex", "sphere", "ball", "gaussian", "exponential_orthant"}
)
# Spaces whose moments vanish whenever one exponent is odd.
SIGN_INVARIANT = frozenset({"sphere", "ball", "gaussian"})


@dataclass(frozen=True)
class SpaceDescriptor:
    kind: str
    dim: int
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None
    norm: Optional[str] = None
    moments: Optional[Tuple[Fraction, ...]] = None

    def __post_init__(self) -> None:
        if self.kind not in SPACE_KINDS:
            raise ValueError(f"Unknown space kind {self.kind!r}.")
        if self.dim < 1 and self.kind != "complex_projective":
            raise ValueError(f"Space dimension must be >= 1, got {self.dim}.")
        if self.kind == "jacobi_interval":
            if self.a is None or self.b is None or self.a <= -1 or self.b <= -1:
                raise ValueError(f"Jacobi parameters must exceed -1, got ({self.a}, {self.b}).")
        if self.kind == "trig_torus" and self.norm not in TORUS_NORMS:
            raise ValueError(f"Torus norm must be one of {TORUS_NORMS}, got {self.norm!r}.")
        if self.kind == "tabulated_interval" and (not self.moments or self.moments[0] <= 0):
            raise ValueError("A tabulated measure needs a positive zeroth moment.")

    @property
    def coordinate_count(self) -> int:
        """Number of coordinates a point of this space carries."""

        if self.kind == "simplex":
            return self.dim + 1
        if self.kind == "complex_projective":
            return 2 * (self.dim + 1)
        if self.kind in ("jacobi_interval", "tabulated_interval"):
            return 1
        return self.dim

    @property
    def label(self) -> str:
        if self.kind == "jacobi_interval":
            return f"jacobi_interval({self.a},{self.b})"
        if self.kind == "trig_torus" and self.norm != "l1":
            return f"trig_torus({self.dim},{self.norm})"
        return f"{self.kind}({self.dim})"

    def to_json(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"kind": self.kind, "dim": self.dim}
        if self.a is not None:
            payload["a"] = str(self.a)
            payload["b"] = str(self.b)
        if self.norm is not None:
            payload["norm"] = self.norm
        if self.moments is not None:
            payload["moments"] = [f"{m.numerator}/{m.denominator}" for m in self.moments]
        return payload

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "SpaceDescriptor":
        try:
            kind = payload["kind"]
            dim = int(payload.get("dim", 1))
            a = Fraction(str(payload["a"])) if payload.get("a") is not None else None
            b = Fraction(str(payload["b"])) if payload.get("b") is not None else None
            norm = payload.get("norm")
            if kind == "trig_torus" and norm is None:
                norm = "l1"
            raw_moments = payload.get("moments")
            moments = tuple(Fraction(str(m)) for m in raw_moments) if raw_moments else None
            return cls(kind, dim, a, b, norm, moments)
        except (KeyError, TypeError, ValueError) as exc:
            raise FormulaFormatError(f"Invalid space description {payload!r}: {exc}") from exc


def simplex(n: int) -> SpaceDescriptor:
    return SpaceDescriptor("simplex", n)


def corner_simplex(n: int) -> SpaceDescriptor:
    return SpaceDescriptor("corner_simplex", n)


def sphere(n: int) -> SpaceDescriptor:
    """Unit sphere S^(n-1) inside R^n."""

    return SpaceDescriptor("sphere", n)


def ball(n: int) -> SpaceDescriptor:
    return SpaceDescriptor("ball", n)


def trig_torus(n: int, norm: str = "l1") -> SpaceDescriptor:
    return SpaceDescriptor("trig_torus", n, norm=norm)


def gaussian(n: int) -> SpaceDescriptor:
    return SpaceDescriptor("gaussian", n)


def exponential_orthant(n: int) -> SpaceDescriptor:
    return SpaceDescriptor("exponential_orthant", n)


def jacobi_interval(a: int | Fraction, b: int | Fraction) -> SpaceDescriptor:
    """Normalized (1-x)^a (1+x)^b on [-1, 1]."""

    return SpaceDescriptor("jacobi_interval", 1, Fraction(a), Fraction(b))


def uniform_interval() -> SpaceDescriptor:
    return jacobi_interval(0, 0)


def tabulated_interval(moments: Sequence[int | Fraction]) -> SpaceDescriptor:
    values = tuple(Fraction(m) for m in moments)
    return SpaceDescriptor("tabulated_interval", 1, moments=tuple(v / values[0] for v in values))


def complex_projective(n: int) -> SpaceDescriptor:
    return SpaceDescriptor("complex_projective", n)


def _double_factorial(k: int) -> int:
    """(k)!! with the convention (-1)!! = 1."""

    result = 1
    while k > 1:
        result *= k
        k -= 2
    return result


@lru_cache(maxsize=None)
def _jacobi_moments(a: Fraction, b: Fraction, count: int) -> Tuple[Fraction, ...]:
    # Integration by parts against (1-x)^(a+1) (1+x)^(b+1) x^(k-1) gives
    # (k + a + b + 1) m_k = (b - a) m_(k-1) + (k - 1) m_(k-2).
    values = [Fraction(1)]
    for k in range(1, count):
        previous2 = values[k - 2] if k >= 2 else Fraction(0)
        values.append(((b - a) * values[k - 1] + (k - 1) * previous2) / (k + a + b + 1))
    return tuple(values)


def interval_moments(space: SpaceDescriptor, count: int) -> Tuple[Fraction, ...]:
    """The first ``count`` power moments of a one-dimensional measure."""

    if space.kind == "jacobi_interval":
        assert space.a is not None and space.b is not None
        return _jacobi_moments(space.a, space.b, count)
    if space.kind == "tabulated_interval":
        assert space.moments is not None
        if len(space.moments) < count:
            raise UnsupportedMomentError(
                f"Measure tabulates {len(space.moments)} moments, {count} are needed."
            )
        return space.moments[:count]
    raise UnsupportedMomentError(f"{space.label} is not a one-dimensional measure.")


def trig_moment(k: Sequence[int]) -> Fraction:
    """Haar integral of the character exp(i k.theta)."""

    return Fraction(1) if all(entry == 0 for entry in k) else Fraction(0)


@lru_cache(maxsize=200_000)
def moment(space: SpaceDescriptor, alpha: ExponentVector) -> Fraction:
    """Exact normalized integral of x^alpha over ``space``."""

    alpha = tuple(alpha)
    if len(alpha) != space.coordinate_count:
        raise ValueError(
            f"Exponent {alpha} has {len(alpha)} entries, {space.label} has "
            f"{space.coordinate_count} coordinates."
        )
    kind = space.kind
    total = sum(alpha)
    if kind == "trig_torus":
        return trig_moment(alpha)
    if any(e < 0 for e in alpha):
        raise UnsupportedMomentError(f"Negative exponent in {alpha} on {space.label}.")
    if kind in ("simplex", "corner_simplex"):
        n = space.dim
        numerator = math.factorial(n) * math.prod(math.factorial(e) for e in alpha)
        return Fraction(numerator, math.factorial(n + total))
    if kind in ("sphere", "ball"):
        if any(e % 2 for e in alpha):
            return Fraction(0)
        n = space.dim
        numerator = math.prod(_double_factorial(e - 1) for e in alpha)
        denominator = math.prod(n + 2 * j for j in range(total // 2))
        value = Fraction(numerator, denominator)
        if kind == "ball":
            value *= Fraction(n, n + total)
        return value
    if kind == "gaussian":
        if any(e % 2 for e in alpha):
            return Fraction(0)
        return Fraction(math.prod(_double_factorial(e - 1) for e in alpha), 2 ** (total // 2))
    if kind == "exponential_orthant":
        return Fraction(math.prod(math.factorial(e) for e in alpha))
    if kind in ("jacobi_interval", "tabulated_interval"):
        return interval_moments(space, total + 1)[total]
    raise UnsupportedMomentError(f"No moment oracle for {space.label}.")


def has_moment_oracle(space: SpaceDescriptor) -> bool:
    return space.kind != "complex_projective"


def odd_moments_vanish(space: SpaceDescriptor) -> bool:
    """True when every moment with an odd exponent entry is zero."""

    if space.kind in SIGN_INVARIANT:
        return True
    return space.kind == "jacobi_interval" and space.a == space.b


def sample_points(space: SpaceDescriptor, count: int, rng: np.random.Generator) -> npt.NDArray[np.float64]:
    """Independent samples from the normalized measure, one point per row."""

    n = space.dim
    kind = space.kind
    if kind == "simplex":
        return rng.dirichlet(np.ones(n + 1), size=count)
    if kind == "corner_simplex":
        return rng.dirichlet(np.ones(n + 1), size=count)[:, :n]
    if kind in ("sphere", "ball"):
        raw = rng.standard_normal((count, n))
        points = raw / np.linalg.norm(raw, axis=1, keepdims=True)
        if kind == "ball":
            points *= rng.random(count)[:, None] ** (1.0 / n)
        return points
    if kind == "gaussian":
        return rng.standard_normal((count, n)) / math.sqrt(2.0)
    if kind == "exponential_orthant":
        return rng.exponential(size=(count, n))
    if kind == "jacobi_interval":
        assert space.a is not None and space.b is not None
        u = rng.beta(float(space.b) + 1.0, float(space.a) + 1.0, size=count)
        return (2.0 * u - 1.0)[:, None]
    if kind == "trig_torus":
        return rng.random((count, n))
    raise UnsupportedMomentError(f"Cannot sample {space.label}.")


__all__ = [
    "PERMUTATION_INVARIANT",
    "SIGN_INVARIANT",
    "SPACE_KINDS",
    "SpaceDescriptor",
    "ball",
    "complex_projective",
    "corner_simplex",
    "exponential_orthant",
    "gaussian",
    "has_moment_oracle",
    "interval_moments",
    "jacobi_interval",
    "moment",
    "odd_moments_vanish",
    "sample_points",
    "simplex",
    "sphere",
    "tabulated_interval",
    "trig_moment",
    "trig_torus",
    "uniform_interval",
]
