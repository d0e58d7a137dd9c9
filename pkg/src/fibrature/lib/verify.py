"""Exactness verification of cubature formulas.

Monomials are walked depth-first in lexicographic order, so every monomial
costs a single vector product. Exact formulas are checked in rational or
quadratic-field arithmetic over numpy object arrays; float formulas in
mpmath at the run precision, or in IEEE double against a relative
tolerance on request. Torus formulas are checked on characters, exactly
via cyclotomic remainders.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from time import perf_counter
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from mpmath import mp
from scipy.spatial import cKDTree
from sympy import Poly, QQ, Rational, cyclotomic_poly, symbols

from fibrature.lib.config import DEFAULT_FLOAT_TOL, DEFAULT_PRECISION_BITS
from fibrature.lib.errors import ScalarModeError, UnsupportedMomentError
from fibrature.lib.exact import ExponentVector, Scalar, format_scalar, is_exact, to_mpf
from fibrature.lib.formula import Formula
from fibrature.lib.measures import (
    PERMUTATION_INVARIANT,
    SpaceDescriptor,
    moment,
    odd_moments_vanish,
)

_X = symbols("x")


@dataclass(frozen=True)
class MonomialResidual:
    alpha: ExponentVector
    degree: int
    residual: Any
    passed: bool


@dataclass
class VerificationReport:
    degree: int
    mode: str
    tolerance: Optional[float]
    residuals: List[MonomialResidual] = field(default_factory=list)
    pruned: int = 0
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.residuals)

    @property
    def failures(self) -> List[MonomialResidual]:
        return [r for r in self.residuals if not r.passed]

    @property
    def monomial_count(self) -> int:
        return len(self.residuals) + self.pruned

    @property
    def worst_residual(self) -> Any:
        if not self.residuals:
            return 0
        return max((abs(r.residual) for r in self.residuals), key=float)

    def first_failing_degree(self) -> Optional[int]:
        degrees = [r.degree for r in self.failures]
        return min(degrees) if degrees else None

    def to_json(self, *, max_failures: int = 20) -> Dict[str, Any]:
        def render(value: Any) -> Any:
            return format_scalar(value) if is_exact(value) else float(value)

        return {
            "degree": self.degree,
            "mode": self.mode,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "monomial_count": self.monomial_count,
            "checked": len(self.residuals),
            "pruned": self.pruned,
            "worst_residual": render(self.worst_residual),
            "failures": [
                {"alpha": list(r.alpha), "degree": r.degree, "residual": render(r.residual)}
                for r in self.failures[:max_failures]
            ],
            "elapsed_seconds": round(self.elapsed, 3),
        }


# ---------------------------------------------------------------------------
# symmetry certification


class _SymmetryOracle:
    """Decides whether a coordinate map preserves the weighted point multiset.

    Float data is matched point to point through a k-d tree and each match is
    then confirmed within the run tolerance at the working precision.
    """

    def __init__(self, f: Formula, tol: float = DEFAULT_FLOAT_TOL) -> None:
        self.exact = f.is_exact
        if self.exact:
            self.items = [tuple(p) + (w,) for p, w in zip(f.points, f.weights)]
            self.reference = Counter(self.items)
        else:
            self.tol = mp.mpf(tol)
            self.values = [[to_mpf(c) for c in p] + [to_mpf(w)] for p, w in zip(f.points, f.weights)]
            self.rows = np.array([[float(v) for v in row] for row in self.values], dtype=np.float64)
            self.tree = cKDTree(self.rows)

    def invariant(self, permutation: Sequence[int], signs: Sequence[int]) -> bool:
        if self.exact:
            width = len(permutation)
            image = Counter(
                tuple(item[permutation[i]] if signs[i] > 0 else -item[permutation[i]] for i in range(width))
                + (item[-1],)
                for item in self.items
            )
            return image == self.reference
        width = self.rows.shape[1] - 1
        moved = self.rows[:, list(permutation) + [width]].copy()
        moved[:, :width] *= np.array(signs, dtype=np.float64)
        _, matches = self.tree.query(moved, k=1, p=np.inf)
        if len(np.unique(matches)) != len(matches):
            return False
        for i, j in enumerate(matches):
            source, target = self.values[i], self.values[int(j)]
            for c in range(width):
                image = source[permutation[c]] if signs[c] > 0 else -source[permutation[c]]
                if abs(image - target[c]) > self.tol:
                    return False
            if abs(source[width] - target[width]) > self.tol:
                return False
        return True


@dataclass(frozen=True)
class _Pruning:
    odd_coordinates: Tuple[int, ...] = ()
    central: bool = False
    blocks: Tuple[Tuple[int, int], ...] = ()

    def skips(self, alpha: ExponentVector) -> bool:
        for i in self.odd_coordinates:
            if alpha[i] % 2:
                return True
        if self.central and sum(alpha) % 2:
            return True
        for start, stop in self.blocks:
            for i in range(start, stop - 1):
                if alpha[i] < alpha[i + 1]:
                    return True
        return False


def _certify(f: Formula, log: logging.Logger, tol: float = DEFAULT_FLOAT_TOL) -> _Pruning:
    space = f.space
    width = space.coordinate_count
    if len(f) == 0:
        return _Pruning()
    oracle = _SymmetryOracle(f, tol)
    identity = list(range(width))
    odd: List[int] = []
    central = False
    if odd_moments_vanish(space):
        for i in range(width):
            signs = [1] * width
            signs[i] = -1
            if oracle.invariant(identity, signs):
                odd.append(i)
        if len(odd) < width:
            central = oracle.invariant(identity, [-1] * width)
    blocks: List[Tuple[int, int]] = []
    if space.kind in PERMUTATION_INVARIANT and width > 1:
        start = 0
        for i in range(width - 1):
            swap = identity.copy()
            swap[i], swap[i + 1] = i + 1, i
            if not oracle.invariant(swap, [1] * width):
                if i + 1 - start > 1:
                    blocks.append((start, i + 1))
                start = i + 1
        if width - start > 1:
            blocks.append((start, width))
    pruning = _Pruning(tuple(odd), central, tuple(blocks))
    log.debug(
        "Certified symmetries: sign flips on %s, central=%s, permutation blocks %s.",
        pruning.odd_coordinates,
        pruning.central,
        pruning.blocks,
    )
    return pruning


# ---------------------------------------------------------------------------
# monomial verification


@dataclass
class _Arithmetic:
    columns: List[npt.NDArray[Any]]
    weights: npt.NDArray[Any]
    equal_weight: Optional[Any]
    one: Any
    radius_squared: Any
    exact: bool
    fast: bool = False


def _prepare(f: Formula, mode: str, tol: float, fast: bool = False) -> _Arithmetic:
    width = f.space.coordinate_count
    if mode == "exact":
        convert: Callable[[Any], Any] = lambda v: Fraction(v) if isinstance(v, int) else v
        dtype: Any = object
        one: Any = Fraction(1)
    elif fast:
        convert = float
        dtype = np.float64
        one = 1.0
    else:
        convert = to_mpf
        dtype = object
        one = mp.mpf(1)
    columns = [np.array([convert(p[j]) for p in f.points], dtype=dtype) for j in range(width)]
    weights = np.array([convert(w) for w in f.weights], dtype=dtype)
    first = weights[0] if len(weights) else one
    equal = first if all(w == first for w in weights) else None

    radius_squared: Any = one
    if f.space.kind == "sphere" and len(f):
        norms = sum(col * col for col in columns)
        radius_squared = norms[0]
        if mode == "exact":
            if any(value != radius_squared for value in norms):
                raise ValueError("Sphere formula points do not share a common radius.")
        elif any(abs(value - radius_squared) > tol * max(1, abs(radius_squared)) for value in norms):
            raise ValueError("Sphere formula points do not share a common radius.")
    return _Arithmetic(columns, weights, equal, one, radius_squared, mode == "exact", fast and mode != "exact")


def _scaled_moment(space: SpaceDescriptor, alpha: ExponentVector, arith: _Arithmetic) -> Any:
    value = moment(space, alpha)
    if value == 0:
        return arith.one * 0
    total = sum(alpha)
    if arith.exact:
        scaled: Any = value
        if space.kind == "sphere" and total:
            scaled = value * arith.radius_squared ** (total // 2)
        return scaled
    converted = to_mpf(value) if not isinstance(arith.one, float) else float(value)
    if space.kind == "sphere" and total:
        converted = converted * arith.radius_squared ** (total // 2)
    return converted


def _walk(
    arith: _Arithmetic,
    start: int,
    product: npt.NDArray[Any],
    budget: int,
    prefix: Tuple[int, ...],
) -> Iterator[Tuple[ExponentVector, npt.NDArray[Any]]]:
    column = arith.columns[start]
    last = start == len(arith.columns) - 1
    power = product
    for exponent in range(budget + 1):
        if exponent:
            power = power * column
        alpha = prefix + (exponent,)
        if last:
            yield alpha, power
        else:
            yield from _walk(arith, start + 1, power, budget - exponent, alpha)


def _integrate(arith: _Arithmetic, values: npt.NDArray[Any]) -> Any:
    if arith.equal_weight is not None:
        return arith.equal_weight * values.sum()
    return np.dot(arith.weights, values)


def _check_branch(
    f: Formula,
    arith: _Arithmetic,
    pruning: _Pruning,
    first_exponent: int,
    t: int,
    tol: Any,
) -> Tuple[List[MonomialResidual], int]:
    residuals: List[MonomialResidual] = []
    pruned = 0
    base = np.full(len(f), arith.one, dtype=arith.weights.dtype)
    product = base * arith.columns[0] ** first_exponent if first_exponent else base
    if len(arith.columns) == 1:
        leaves: Iterator[Tuple[ExponentVector, npt.NDArray[Any]]] = iter([((first_exponent,), product)])
    else:
        leaves = _walk(arith, 1, product, t - first_exponent, (first_exponent,))
    for alpha, values in leaves:
        if pruning.skips(alpha):
            pruned += 1
            continue
        expected = _scaled_moment(f.space, alpha, arith)
        residual = _integrate(arith, values) - expected
        if arith.exact:
            passed = residual == 0
        elif arith.fast:
            passed = abs(residual) <= tol * max(1.0, abs(expected))
        else:
            passed = abs(residual) <= tol
        residuals.append(MonomialResidual(alpha, sum(alpha), residual, bool(passed)))
    return residuals, pruned


# ---------------------------------------------------------------------------
# character verification


def character_norm(k: Sequence[int], norm: str) -> int:
    """Norm of a character index; A_n characters are given in simple-root coordinates."""

    if norm == "l1":
        return sum(abs(v) for v in k)
    ambient = [k[0]] + [k[i] - k[i - 1] for i in range(1, len(k))] + [-k[-1]]
    return sum(v for v in ambient if v > 0)


def _l1_shell(n: int, budget: int) -> Iterator[Tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for head in range(-budget, budget + 1):
        for tail in _l1_shell(n - 1, budget - abs(head)):
            yield (head,) + tail


def enumerate_characters(n: int, t: int, norm: str = "l1", *, half: bool = False) -> List[Tuple[int, ...]]:
    """Character indices of norm <= t, optionally one of each pair {k, -k}."""

    if norm == "l1":
        candidates: Iterator[Tuple[int, ...]] = _l1_shell(n, t)
    else:
        # partial sums of a zero-sum vector with positive part <= t stay in [-t, t]
        candidates = itertools.product(range(-t, t + 1), repeat=n)
    found = []
    for k in candidates:
        if character_norm(k, norm) > t:
            continue
        if half:
            leading = next((v for v in k if v != 0), 0)
            if leading < 0:
                continue
        found.append(k)
    found.sort(key=lambda k: (character_norm(k, norm), k))
    return found


@lru_cache(maxsize=None)
def _cyclotomic(order: int) -> Poly:
    return Poly(cyclotomic_poly(order, _X), _X, domain=QQ)


def _exact_character_sum_vanishes(phases: Sequence[Fraction], weights: Sequence[Fraction]) -> bool:
    order = 1
    for phase in phases:
        order = order * phase.denominator // math.gcd(order, phase.denominator)
    coefficients: Dict[int, Fraction] = {}
    for phase, weight in zip(phases, weights):
        exponent = (phase.numerator * (order // phase.denominator)) % order
        coefficients[exponent] = coefficients.get(exponent, Fraction(0)) + weight
    terms = {(e,): Rational(c.numerator, c.denominator) for e, c in coefficients.items() if c != 0}
    if not terms:
        return True
    polynomial = Poly.from_dict(terms, _X, domain=QQ)
    return polynomial.rem(_cyclotomic(order)).is_zero


def _check_characters(
    f: Formula,
    characters: Sequence[Tuple[int, ...]],
    mode: str,
    tol: Any,
    fast: bool = False,
) -> List[MonomialResidual]:
    norm = f.space.norm or "l1"
    residuals: List[MonomialResidual] = []
    if mode == "exact":
        points = [[Fraction(c) for c in p] for p in f.points]
        weights = [Fraction(w) for w in f.weights]
        for k in characters:
            degree = character_norm(k, norm)
            if not any(k):
                residual = sum(weights, Fraction(0)) - 1
                residuals.append(MonomialResidual(k, degree, residual, residual == 0))
                continue
            phases = [sum((kj * cj for kj, cj in zip(k, p)), Fraction(0)) % 1 for p in points]
            vanishes = _exact_character_sum_vanishes(phases, weights)
            residuals.append(MonomialResidual(k, degree, Fraction(0) if vanishes else Fraction(1), vanishes))
        return residuals
    if fast:
        angles = np.array([[float(c) for c in p] for p in f.points], dtype=np.float64)
        weights_f = np.array([float(w) for w in f.weights], dtype=np.float64)
        for k in characters:
            total = np.dot(weights_f, np.exp(2j * np.pi * (angles @ np.array(k, dtype=np.float64))))
            residual = abs(total - (1.0 if not any(k) else 0.0))
            residuals.append(MonomialResidual(k, character_norm(k, norm), residual, residual <= tol))
        return residuals
    points_m, weights_m = f.to_mpf()
    for k in characters:
        total = mp.fsum(
            w * mp.expjpi(2 * mp.fsum(kj * cj for kj, cj in zip(k, p))) for p, w in zip(points_m, weights_m)
        )
        residual = abs(total - (1 if not any(k) else 0))
        residuals.append(MonomialResidual(k, character_norm(k, norm), residual, residual <= tol))
    return residuals


# ---------------------------------------------------------------------------
# public entry points


def verify(
    f: Formula,
    t: int,
    mode: str = "exact",
    tol: Optional[float] = None,
    *,
    precision: Optional[int] = None,
    workers: int = 1,
    prune: bool = True,
    fast: bool = False,
    logger: Optional[logging.Logger] = None,
) -> VerificationReport:
    """Check that ``f`` integrates every monomial (or character) of degree <= t.

    Float mode evaluates in mpmath at ``precision`` bits (the formula's own
    precision, else 256) against the absolute tolerance ``tol``. With
    ``fast`` it evaluates in IEEE double instead and scales ``tol`` by the
    size of each moment.
    """

    log = logger or logging.getLogger(__name__)
    if t < 0:
        raise ValueError(f"Degree must be >= 0, got {t}.")
    if mode not in ("exact", "float"):
        raise ValueError(f"Unknown mode {mode!r}.")
    if mode == "exact" and not f.is_exact:
        raise ScalarModeError("Exact verification needs exact coordinates and weights.")
    if f.space.kind == "complex_projective":
        raise UnsupportedMomentError("Projective formulas are checked with cp_design_check.")
    tolerance = DEFAULT_FLOAT_TOL if tol is None else tol
    bits = precision or f.precision or DEFAULT_PRECISION_BITS
    report = VerificationReport(t, mode, None if mode == "exact" else tolerance)

    t0 = perf_counter()
    with mp.workprec(bits):
        fast = fast and mode == "float"
        threshold: Any = tolerance if mode == "exact" or fast else mp.mpf(tolerance)
        if f.space.kind == "trig_torus":
            characters = enumerate_characters(f.space.dim, t, f.space.norm or "l1", half=True)
            chunks = [characters[i::workers] for i in range(workers)]
            if workers > 1:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    parts = list(pool.map(lambda chunk: _check_characters(f, chunk, mode, threshold, fast), chunks))
            else:
                parts = [_check_characters(f, characters, mode, threshold, fast)]
            merged = [r for part in parts for r in part]
            merged.sort(key=lambda r: (r.degree, r.alpha))
            report.residuals = merged
        else:
            arith = _prepare(f, mode, tolerance, fast)
            pruning = _certify(f, log, tolerance) if prune else _Pruning()
            branches = list(range(t + 1))
            if workers > 1:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    parts = list(
                        pool.map(lambda e: _check_branch(f, arith, pruning, e, t, threshold), branches)
                    )
            else:
                parts = [_check_branch(f, arith, pruning, e, t, threshold) for e in branches]
            for residuals, pruned in parts:
                report.residuals.extend(residuals)
                report.pruned += pruned
    report.elapsed = perf_counter() - t0
    log.info(
        "Verification at degree %d finished in %.2f s (%d checked, %d pruned, %s).",
        t,
        report.elapsed,
        len(report.residuals),
        report.pruned,
        "pass" if report.passed else f"{len(report.failures)} failures",
    )
    return report


def max_degree(
    f: Formula,
    t_max: int,
    mode: str = "exact",
    tol: Optional[float] = None,
    **kwargs: Any,
) -> int:
    """Largest t <= t_max at which ``f`` verifies, or -1."""

    report = verify(f, t_max, mode, tol, **kwargs)
    failing = report.first_failing_degree()
    return t_max if failing is None else failing - 1


@dataclass(frozen=True)
class DesignCheckReport:
    t: int
    average: Any
    target: Fraction
    passed: bool


def _hermitian_pair(x: Sequence[Any], y: Sequence[Any]) -> Tuple[Any, Any]:
    real = 0
    imag = 0
    for k in range(0, len(x), 2):
        a, b, c, d = x[k], x[k + 1], y[k], y[k + 1]
        real = real + a * c + b * d
        imag = imag + a * d - b * c
    return real, imag


def cp_design_check(
    lines: Sequence[Sequence[Scalar]],
    t: int,
    *,
    weights: Optional[Sequence[Scalar]] = None,
    mode: str = "exact",
    tol: float = DEFAULT_FLOAT_TOL,
    precision: int = DEFAULT_PRECISION_BITS,
    norm: Scalar = 1,
) -> DesignCheckReport:
    """Welch criterion for a weighted set of lines in C^n.

    Each line is a vector of 2n real parts (re, im per coordinate) with
    squared length ``norm``; any other length raises ValueError. The lines
    form a t-design exactly when the weighted mean of
    |<x,y>|^(2t) / norm^(2t) over ordered pairs equals 1 / binomial(n + t - 1, t).
    """

    if not lines:
        raise ValueError("No lines given.")
    n = len(lines[0]) // 2
    if any(len(v) != 2 * n for v in lines):
        raise ValueError("Lines have different dimensions.")
    target = Fraction(1, math.comb(n + t - 1, t))
    with mp.workprec(precision):
        if mode == "exact":
            vectors: List[List[Any]] = [[Fraction(c) if isinstance(c, int) else c for c in v] for v in lines]
            w: List[Any] = (
                [Fraction(1, len(lines))] * len(lines) if weights is None else list(weights)
            )
        else:
            vectors = [[to_mpf(c) for c in v] for v in lines]
            w = [mp.mpf(1) / len(lines)] * len(lines) if weights is None else [to_mpf(x) for x in weights]
        expected: Any = (Fraction(norm) if isinstance(norm, int) else norm) if mode == "exact" else to_mpf(norm)
        if expected == 0:
            raise ValueError("Lines cannot have zero length.")
        norms = [sum((c * c for c in v), 0 * v[0]) for v in vectors]
        for index, length in enumerate(norms):
            off = length != expected if mode == "exact" else abs(length - expected) > tol * abs(expected)
            if off:
                raise ValueError(f"Line {index} has squared length {length}, expected {norm}.")
        total: Any = 0
        for i, x in enumerate(vectors):
            for j, y in enumerate(vectors):
                real, imag = _hermitian_pair(x, y)
                cosine = (real * real + imag * imag) / (norms[i] * norms[j])
                total = total + w[i] * w[j] * cosine**t
        if mode == "exact":
            passed = total == target
        else:
            passed = abs(total - to_mpf(target)) <= tol
    return DesignCheckReport(t, total, target, bool(passed))


__all__ = [
    "DesignCheckReport",
    "MonomialResidual",
    "VerificationReport",
    "character_norm",
    "cp_design_check",
    "enumerate_characters",
    "max_degree",
    "verify",
]
