"""Exact scalars: rationals, real quadratic fields and tagged bigfloats.

Rationals are plain :class:`fractions.Fraction` values. An element of a real
quadratic field Q(sqrt d) is a :class:`QuadraticScalar`; it always carries a
nonzero irrational part, because every operation that cancels the radical
hands back a ``Fraction``. Bigfloats are ``mpmath.mpf`` values.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

import mpmath
from mpmath import mp
from sympy import factorint

from fibrature.lib.errors import ScalarFieldError

ExponentVector = Tuple[int, ...]
Rational = Union[int, Fraction]

_RATIONAL = r"[+-]?\d+(?:/\d+)?"
_QUADRATIC_RE = re.compile(
    rf"^\s*({_RATIONAL})\s*([+-])\s*(\d+(?:/\d+)?)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*$"
)


@lru_cache(maxsize=None)
def _check_radicand(d: int) -> int:
    if d < 2:
        raise ScalarFieldError(f"Radicand must be an integer >= 2, got {d}.")
    if any(power > 1 for power in factorint(d).values()):
        raise ScalarFieldError(f"Radicand {d} is not square-free.")
    return d


class QuadraticScalar:
    """The number a + b*sqrt(d) with rational a, nonzero rational b."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Rational, b: Rational, d: int) -> None:
        b = Fraction(b)
        if b == 0:
            raise ScalarFieldError("QuadraticScalar needs a nonzero irrational part; use quadratic().")
        self.a = Fraction(a)
        self.b = b
        self.d = _check_radicand(int(d))

    # construction helpers -------------------------------------------------
    @staticmethod
    def _lift(other: object, d: int) -> Tuple[Fraction, Fraction] | None:
        if isinstance(other, QuadraticScalar):
            if other.d != d:
                raise ScalarFieldError(f"Cannot mix sqrt({d}) with sqrt({other.d}).")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def conjugate(self) -> "QuadraticScalar":
        return QuadraticScalar(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm a^2 - d b^2."""

        return self.a * self.a - self.d * self.b * self.b

    def to_mpf(self) -> mpmath.mpf:
        return mp.mpf(self.a.numerator) / self.a.denominator + (
            mp.mpf(self.b.numerator) / self.b.denominator
        ) * mp.sqrt(self.d)

    def sign(self) -> int:
        a, b = self.a, self.b
        if a >= 0 and b > 0:
            return 1
        if a <= 0 and b < 0:
            return -1
        lhs, rhs = a * a, self.d * b * b
        if a > 0:
            return 1 if lhs > rhs else -1
        return 1 if rhs > lhs else -1

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: object):
        if isinstance(other, mpmath.mpf):
            return self.to_mpf() + other
        lifted = self._lift(other, self.d)
        if lifted is None:
            return NotImplemented
        return quadratic(self.a + lifted[0], self.b + lifted[1], self.d)

    __radd__ = __add__

    def __neg__(self) -> "QuadraticScalar":
        return QuadraticScalar(-self.a, -self.b, self.d)

    def __pos__(self) -> "QuadraticScalar":
        return self

    def __sub__(self, other: object):
        if isinstance(other, mpmath.mpf):
            return self.to_mpf() - other
        lifted = self._lift(other, self.d)
        if lifted is None:
            return NotImplemented
        return quadratic(self.a - lifted[0], self.b - lifted[1], self.d)

    def __rsub__(self, other: object):
        return (-self).__add__(other)

    def __mul__(self, other: object):
        if isinstance(other, mpmath.mpf):
            return self.to_mpf() * other
        lifted = self._lift(other, self.d)
        if lifted is None:
            return NotImplemented
        c, e = lifted
        return quadratic(self.a * c + self.d * self.b * e, self.a * e + self.b * c, self.d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticScalar":
        n = self.norm()
        return QuadraticScalar(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other: object):
        if isinstance(other, mpmath.mpf):
            return self.to_mpf() / other
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadraticScalar(self.a / other, self.b / other, self.d)
        if isinstance(other, QuadraticScalar):
            if other.d != self.d:
                raise ScalarFieldError(f"Cannot mix sqrt({self.d}) with sqrt({other.d}).")
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other: object):
        if isinstance(other, mpmath.mpf):
            return other / self.to_mpf()
        if isinstance(other, (int, Fraction)):
            return self.inverse() * Fraction(other)
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result: Scalar = Fraction(1)
        base: Scalar = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __abs__(self) -> "QuadraticScalar":
        return -self if self.sign() < 0 else self

    # comparison -----------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadraticScalar):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.d))

    def _cmp(self, other: object) -> int:
        if isinstance(other, (mpmath.mpf, float)):
            value = self.to_mpf()
            return (value > other) - (value < other)
        diff = self - other
        return scalar_sign(diff)

    def __lt__(self, other: object) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: object) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: object) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: object) -> bool:
        return self._cmp(other) >= 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self) -> str:
        return f"QuadraticScalar({self.a}, {self.b}, {self.d})"

    def __str__(self) -> str:
        return format_scalar(self)


Scalar = Union[Fraction, QuadraticScalar, mpmath.mpf]


def quadratic(a: Rational, b: Rational, d: int) -> Union[Fraction, QuadraticScalar]:
    """Return a + b*sqrt(d), collapsing to a Fraction when b == 0."""

    b = Fraction(b)
    if b == 0:
        return Fraction(a)
    return QuadraticScalar(a, b, d)


def sqrt_rational(value: Rational) -> Union[Fraction, QuadraticScalar]:
    """Exact square root of a nonnegative rational."""

    value = Fraction(value)
    if value < 0:
        raise ValueError(f"Cannot take the square root of {value}.")
    if value == 0:
        return Fraction(0)
    # sqrt(p/q) = sqrt(p*q)/q, then pull the square part out of p*q.
    radicand = value.numerator * value.denominator
    square, free = 1, 1
    for prime, power in factorint(radicand).items():
        square *= prime ** (power // 2)
        if power % 2:
            free *= prime
    coefficient = Fraction(square, value.denominator)
    if free == 1:
        return coefficient
    return QuadraticScalar(0, coefficient, free)


def scalar_sign(value: object) -> int:
    if isinstance(value, QuadraticScalar):
        return value.sign()
    return (value > 0) - (value < 0)  # type: ignore[operator]


def is_exact(value: object) -> bool:
    return isinstance(value, (int, Fraction, QuadraticScalar))


def to_mpf(value: object) -> mpmath.mpf:
    if isinstance(value, QuadraticScalar):
        return value.to_mpf()
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    return mp.mpf(value)


def to_float(value: object) -> float:
    return float(value)  # type: ignore[arg-type]


def conjugate_scalar(value: Scalar) -> Scalar:
    """Galois conjugate (sqrt d -> -sqrt d); rationals and floats are fixed."""

    if isinstance(value, QuadraticScalar):
        return value.conjugate()
    return value


def scalar_tag(values: Iterable[object]) -> str:
    """Tag of the smallest scalar class holding every value.

    Returns ``"rational"``, ``"quadratic:<d>"`` or ``"float"``. Two different
    radicands in one collection are an error.
    """

    radicand: int | None = None
    has_float = False
    for value in values:
        if isinstance(value, QuadraticScalar):
            if radicand is not None and radicand != value.d:
                raise ScalarFieldError(f"Values mix sqrt({radicand}) and sqrt({value.d}).")
            radicand = value.d
        elif not isinstance(value, (int, Fraction)):
            has_float = True
    if has_float:
        return "float"
    if radicand is not None:
        return f"quadratic:{radicand}"
    return "rational"


def _format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def format_scalar(value: object, *, precision: int | None = None) -> str:
    """Serialize a scalar as ``p/q``, ``p/q+r/s*sqrt(d)`` or a decimal string."""

    if isinstance(value, QuadraticScalar):
        sign = "+" if value.b > 0 else "-"
        return f"{_format_rational(value.a)}{sign}{_format_rational(abs(value.b))}*sqrt({value.d})"
    if isinstance(value, (int, Fraction)):
        return _format_rational(Fraction(value))
    bits = precision or mp.prec
    digits = int(bits * math.log10(2)) + 2
    with mp.workprec(bits):
        return mpmath.nstr(mp.mpf(value), digits)


def parse_scalar(text: object, *, tag: str = "rational", precision: int | None = None) -> Scalar:
    """Inverse of :func:`format_scalar` under the given scalar tag."""

    if tag == "float":
        with mp.workprec(precision or mp.prec):
            return mp.mpf(str(text))
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"Exact scalars must be strings, got {text!r}.")
    match = _QUADRATIC_RE.match(text)
    if match:
        a, sign, b, d = match.groups()
        coefficient = Fraction(b) if sign == "+" else -Fraction(b)
        value = quadratic(Fraction(a), coefficient, int(d))
        if tag.startswith("quadratic:") and isinstance(value, QuadraticScalar):
            expected = int(tag.split(":", 1)[1])
            if value.d != expected:
                raise ScalarFieldError(f"Scalar {text!r} is not in Q(sqrt({expected})).")
        elif tag == "rational" and isinstance(value, QuadraticScalar):
            raise ScalarFieldError(f"Scalar {text!r} is irrational but tagged rational.")
        return value
    if not re.fullmatch(rf"\s*{_RATIONAL}\s*", text):
        raise ValueError(f"Cannot parse exact scalar {text!r}.")
    return Fraction(text.strip())


def _walk_monomials(dim: int, budget: int, prefix: List[int]) -> Iterator[ExponentVector]:
    if len(prefix) == dim - 1:
        for exponent in range(budget + 1):
            yield tuple(prefix + [exponent])
        return
    for exponent in range(budget + 1):
        prefix.append(exponent)
        yield from _walk_monomials(dim, budget - exponent, prefix)
        prefix.pop()


def enumerate_monomials(dim: int, max_degree: int, *, even_only: bool = False) -> List[ExponentVector]:
    """All exponent vectors of total degree <= max_degree in lexicographic order."""

    if dim < 1:
        raise ValueError(f"Dimension must be >= 1, got {dim}.")
    if max_degree < 0:
        raise ValueError(f"Degree must be >= 0, got {max_degree}.")
    monomials = list(_walk_monomials(dim, max_degree, []))
    if even_only:
        monomials = [alpha for alpha in monomials if all(e % 2 == 0 for e in alpha)]
    return monomials


def monomial_count(dim: int, max_degree: int) -> int:
    return math.comb(dim + max_degree, dim)


def monomial_degree(alpha: Sequence[int]) -> int:
    return sum(alpha)


__all__ = [
    "ExponentVector",
    "QuadraticScalar",
    "Scalar",
    "conjugate_scalar",
    "enumerate_monomials",
    "format_scalar",
    "is_exact",
    "monomial_count",
    "monomial_degree",
    "parse_scalar",
    "quadratic",
    "scalar_sign",
    "scalar_tag",
    "sqrt_rational",
    "to_float",
    "to_mpf",
]
