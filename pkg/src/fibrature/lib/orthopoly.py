"""Jacobi polynomials and one-dimensional Gauss, Lobatto and Radau rules.

Polynomials are built with exact rational coefficients. Nodes are refined at
bigfloat precision by bisection followed by safeguarded Newton steps, with
the zeros of the previous degree as brackets (zeros of consecutive
orthogonal polynomials interlace).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from time import perf_counter
from typing import Callable, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp

from fibrature.lib.config import DEFAULT_PRECISION_BITS
from fibrature.lib.errors import ConvergenceError, DegenerateMomentsError
from fibrature.lib.formula import Formula
from fibrature.lib.measures import SpaceDescriptor, interval_moments, jacobi_interval

Rational = int | Fraction
Evaluator = Callable[[mpmath.mpf], Tuple[mpmath.mpf, mpmath.mpf]]


@dataclass(frozen=True)
class OrthoPoly:
    """P_t^(a,b) with ascending exact coefficients."""

    a: Fraction
    b: Fraction
    degree: int
    coefficients: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) != self.degree + 1:
            raise ValueError("Coefficient list does not match the degree.")
        if self.coefficients[-1] == 0:
            raise ValueError("Leading coefficient vanishes.")

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1]

    def __call__(self, x):
        """Horner evaluation, exact for rationals and in bigfloats otherwise."""

        if isinstance(x, (int, Fraction)):
            exact = Fraction(0)
            for c in reversed(self.coefficients):
                exact = exact * x + c
            return exact
        value = mp.mpf(0)
        for c in reversed(self.coefficients):
            value = value * x + _q(c)
        return value

    def derivative(self) -> Tuple[Fraction, ...]:
        return tuple(k * c for k, c in enumerate(self.coefficients) if k > 0)


def _q(value: Fraction) -> mpmath.mpf:
    return mp.mpf(value.numerator) / value.denominator


def _check_parameters(a: Rational, b: Rational, t: int) -> Tuple[Fraction, Fraction]:
    a, b = Fraction(a), Fraction(b)
    if a <= -1 or b <= -1:
        raise ValueError(f"Jacobi parameters must exceed -1, got ({a}, {b}).")
    if t < 0:
        raise ValueError(f"Degree must be >= 0, got {t}.")
    return a, b


def _recurrence(a: Fraction, b: Fraction, n: int) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    """Coefficients (c0, c1, c2, c3) with c0 P_n = (c1 x + c2) P_(n-1) - c3 P_(n-2), n >= 2."""

    s = 2 * n + a + b
    c0 = 2 * n * (n + a + b) * (s - 2)
    c1 = (s - 1) * s * (s - 2)
    c2 = (s - 1) * (a * a - b * b)
    c3 = 2 * (n + a - 1) * (n + b - 1) * s
    return c0, c1, c2, c3


def jacobi_poly(a: Rational, b: Rational, t: int) -> OrthoPoly:
    """P_t^(a,b) normalized by P_t(1) = binomial(t + a, t)."""

    a, b = _check_parameters(a, b, t)
    previous: List[Fraction] = [Fraction(1)]
    if t == 0:
        return OrthoPoly(a, b, 0, tuple(previous))
    half = (a + b + 2) / 2
    current: List[Fraction] = [(a + 1) - half, half]
    for n in range(2, t + 1):
        c0, c1, c2, c3 = _recurrence(a, b, n)
        nxt = [Fraction(0)] * (n + 1)
        for k, coefficient in enumerate(current):
            nxt[k + 1] += c1 * coefficient
            nxt[k] += c2 * coefficient
        for k, coefficient in enumerate(previous):
            nxt[k] -= c3 * coefficient
        previous, current = current, [c / c0 for c in nxt]
    return OrthoPoly(a, b, t, tuple(current))


def jacobi_leading(a: Rational, b: Rational, t: int) -> Fraction:
    """Leading coefficient A_t of P_t^(a,b)."""

    a, b = _check_parameters(a, b, t)
    if t == 0:
        return Fraction(1)
    value = (a + b + 2) / 2
    for n in range(2, t + 1):
        s = 2 * n + a + b
        value *= (s - 1) * s / (2 * n * (n + a + b))
    return value


def jacobi_norm_squared(a: Rational, b: Rational, t: int) -> Fraction:
    """||P_t^(a,b)||^2 against the normalized weight."""

    a, b = _check_parameters(a, b, t)
    if t == 0:
        return Fraction(1)
    value = (a + 1) * (b + 1) / (a + b + 3)
    for n in range(2, t + 1):
        value *= (n + a) * (n + b) * (2 * n + a + b - 1) / (n * (n + a + b) * (2 * n + a + b + 1))
    return value


def jacobi_evaluate(a: Rational, b: Rational, t: int, x: mpmath.mpf) -> Tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]:
    """(P_t(x), P_t'(x), P_(t-1)(x)) by the three-term recurrence."""

    a, b = _check_parameters(a, b, t)
    p_prev, d_prev = mp.mpf(0), mp.mpf(0)
    p, d = mp.mpf(1), mp.mpf(0)
    if t == 0:
        return p, d, p_prev
    half = _q(a + b + 2) / 2
    p_prev, d_prev = p, d
    p, d = _q(a) + 1 + half * (x - 1), half
    for n in range(2, t + 1):
        c0, c1, c2, c3 = (_q(c) for c in _recurrence(a, b, n))
        linear = c1 * x + c2
        p_next = (linear * p - c3 * p_prev) / c0
        d_next = (linear * d + c1 * p - c3 * d_prev) / c0
        p_prev, d_prev, p, d = p, d, p_next, d_next
    return p, d, p_prev


def _refine_root(
    evaluate: Evaluator,
    lo: mpmath.mpf,
    hi: mpmath.mpf,
    *,
    bits: int,
    index: int,
) -> mpmath.mpf:
    """Root of ``evaluate`` inside (lo, hi), where the function changes sign."""

    f_lo, _ = evaluate(lo)
    f_hi, _ = evaluate(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise ConvergenceError(f"No sign change bracketing zero {index}.", index=index)
    target = mp.mpf(2) ** (-(bits - 4))
    # Bisection until Newton is safe, then Newton kept inside the bracket.
    for _ in range(24):
        mid = (lo + hi) / 2
        f_mid, _ = evaluate(mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    x = (lo + hi) / 2
    for _ in range(4 * bits):
        f_x, d_x = evaluate(x)
        if f_x == 0:
            return x
        if (f_x > 0) == (f_lo > 0):
            lo, f_lo = x, f_x
        else:
            hi = x
        step = f_x / d_x if d_x != 0 else None
        candidate = x - step if step is not None else None
        if candidate is None or not (lo < candidate < hi):
            candidate = (lo + hi) / 2
        if abs(candidate - x) <= target * max(1, abs(x)) or hi - lo <= target:
            return candidate
        x = candidate
    raise ConvergenceError(f"Zero {index} did not converge at {bits} bits.", index=index)


def _zero_chain(
    evaluators: Callable[[int], Evaluator],
    t: int,
    lower: mpmath.mpf,
    upper: mpmath.mpf,
    bits: int,
) -> List[mpmath.mpf]:
    zeros: List[mpmath.mpf] = []
    for k in range(1, t + 1):
        brackets = [lower] + zeros + [upper]
        evaluate = evaluators(k)
        zeros = [
            _refine_root(evaluate, brackets[i], brackets[i + 1], bits=bits, index=i)
            for i in range(k)
        ]
    return zeros


def jacobi_zeros(a: Rational, b: Rational, t: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> List[mpmath.mpf]:
    """All zeros of P_t^(a,b), increasing."""

    if t < 1:
        raise ValueError(f"Degree must be >= 1, got {t}.")
    _check_parameters(a, b, t)
    with mp.workprec(precision_bits + 16):

        def evaluators(k: int) -> Evaluator:
            return lambda x: jacobi_evaluate(a, b, k, x)[:2]

        return _zero_chain(evaluators, t, mp.mpf(-1), mp.mpf(1), precision_bits)


def highest_jacobi_zero(a: Rational, b: Rational, t: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
    """Largest zero of P_t^(a,b), following only the chain of top zeros."""

    if t < 1:
        raise ValueError(f"Degree must be >= 1, got {t}.")
    _check_parameters(a, b, t)
    with mp.workprec(precision_bits + 16):
        top = mp.mpf(-1)
        for k in range(1, t + 1):
            top = _refine_root(
                lambda x, k=k: jacobi_evaluate(a, b, k, x)[:2],
                top,
                mp.mpf(1),
                bits=precision_bits,
                index=k - 1,
            )
        return top


def jacobi_christoffel_weight(
    a: Rational,
    b: Rational,
    t: int,
    node: mpmath.mpf,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> mpmath.mpf:
    """Gauss weight at a zero of P_t^(a,b): -A_(t+1) ||P_t||^2 / (A_t P_t'(x) P_(t+1)(x))."""

    ratio = jacobi_leading(a, b, t + 1) / jacobi_leading(a, b, t)
    norm = jacobi_norm_squared(a, b, t)
    with mp.workprec(precision_bits + 16):
        _, derivative, _ = jacobi_evaluate(a, b, t, node)
        following, _, _ = jacobi_evaluate(a, b, t + 1, node)
        factor = _q(ratio) * _q(norm)
        return -factor / (derivative * following)


def recurrence_from_moments(moments: Sequence[Fraction], t: int) -> Tuple[List[Fraction], List[Fraction]]:
    """Monic recurrence coefficients (alpha_k, beta_k), k < t, from 2t moments.

    Chebyshev's algorithm in exact arithmetic; beta_0 is the total mass.
    """

    if len(moments) < 2 * t:
        raise DegenerateMomentsError(f"{2 * t} moments are needed, got {len(moments)}.")
    m = [Fraction(v) for v in moments[: 2 * t]]
    if m[0] <= 0:
        raise DegenerateMomentsError("The zeroth moment must be positive.")
    alpha = [m[1] / m[0]]
    beta = [m[0]]
    sigma_prev = [Fraction(0)] * (2 * t)
    sigma = list(m)
    for k in range(1, t):
        nxt = [Fraction(0)] * (2 * t)
        for ell in range(k, 2 * t - k):
            nxt[ell] = sigma[ell + 1] - alpha[k - 1] * sigma[ell] - beta[k - 1] * sigma_prev[ell]
        if nxt[k] <= 0:
            raise DegenerateMomentsError(f"Hankel determinant of order {k + 1} is not positive.")
        alpha.append(nxt[k + 1] / nxt[k] - sigma[k] / sigma[k - 1])
        beta.append(nxt[k] / sigma[k - 1])
        sigma_prev, sigma = sigma, nxt
    return alpha, beta


def _monic_evaluator(alpha: Sequence[mpmath.mpf], beta: Sequence[mpmath.mpf], k: int):
    def evaluate(x: mpmath.mpf) -> Tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]:
        p_prev, d_prev = mp.mpf(0), mp.mpf(0)
        p, d = mp.mpf(1), mp.mpf(0)
        for j in range(k):
            b_j = beta[j] if j > 0 else 0
            p_next = (x - alpha[j]) * p - b_j * p_prev
            d_next = (x - alpha[j]) * d + p - b_j * d_prev
            p_prev, d_prev, p, d = p, d, p_next, d_next
        return p, d, p_prev

    return evaluate


def _gauss_from_moments(
    moments: Sequence[Fraction], t: int, bits: int
) -> Tuple[List[mpmath.mpf], List[mpmath.mpf]]:
    """Nodes and weights of the t-point Gauss rule for the normalized moments."""

    alpha_q, beta_q = recurrence_from_moments(moments, t)
    mass = beta_q[0]
    with mp.workprec(bits + 16):
        alpha = [_q(v) for v in alpha_q]
        beta = [_q(v) for v in beta_q]
        beta[0] = mp.mpf(1)
        # Gershgorin disc of the Jacobi matrix bounds every zero.
        radii = [mp.sqrt(v) for v in beta[1:]] + [mp.mpf(0)]
        bound = max(abs(alpha[k]) + radii[k] + (radii[k - 1] if k else 0) for k in range(t)) + 1

        def evaluators(k: int) -> Evaluator:
            monic = _monic_evaluator(alpha, beta, k)
            return lambda x: monic(x)[:2]

        nodes = _zero_chain(evaluators, t, -bound, bound, bits)
        norm = mp.fprod(beta[1:t]) if t > 1 else mp.mpf(1)
        full = _monic_evaluator(alpha, beta, t)
        weights = []
        for x in nodes:
            _, derivative, previous = full(x)
            weights.append(norm / (previous * derivative) * _q(mass))
    return nodes, weights


def gauss_quadrature(
    measure: SpaceDescriptor,
    t: int,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    *,
    logger: Optional[logging.Logger] = None,
) -> Formula:
    """t-point Gauss rule, exact through degree 2t-1."""

    log = logger or logging.getLogger(__name__)
    if t < 1:
        raise ValueError(f"Gauss rules need t >= 1, got {t}.")
    t0 = perf_counter()
    moments = interval_moments(measure, 2 * t)
    nodes, weights = _gauss_from_moments(moments, t, precision_bits)
    log.debug("Gauss rule with %d nodes finished in %.2f s.", t, perf_counter() - t0)
    return Formula(
        measure,
        tuple((x,) for x in nodes),
        tuple(weights),
        claimed_degree=2 * t - 1,
        provenance=f"gauss {measure.label} t={t}",
        precision=precision_bits,
    )


def lobatto_radau_quadrature(
    measure: SpaceDescriptor,
    t: int,
    kind: str = "lobatto",
    precision_bits: int = DEFAULT_PRECISION_BITS,
    *,
    endpoint: int = -1,
) -> Formula:
    """Degree-t rule containing both endpoints (lobatto) or one (radau).

    Lobatto uses t//2 + 2 points, Radau (t + 3)//2; for the parities used
    when lifting to spheres that is (t+3)/2 and (t+2)/2 respectively.
    Interior nodes are Gauss nodes of (1 - x^2) mu, resp. (1 -+ x) mu.
    """

    if kind not in ("lobatto", "radau"):
        raise ValueError(f"Unknown rule kind {kind!r}.")
    if endpoint not in (-1, 1):
        raise ValueError(f"Radau endpoint must be -1 or 1, got {endpoint}.")
    if t < 1:
        raise ValueError(f"Degree must be >= 1, got {t}.")
    count = t // 2 + 2 if kind == "lobatto" else (t + 3) // 2
    interior = count - 2 if kind == "lobatto" else count - 1
    m = interval_moments(measure, 2 * interior + 3)

    with mp.workprec(precision_bits + 16):
        if kind == "lobatto":
            modified = [m[k] - m[k + 2] for k in range(2 * interior)]
        else:
            modified = [m[k] - endpoint * m[k + 1] for k in range(2 * interior)]
        nodes: List[mpmath.mpf] = []
        weights: List[mpmath.mpf] = []
        if interior:
            mass = modified[0]
            ys, vs = _gauss_from_moments([v / mass for v in modified], interior, precision_bits)
            mass_f = _q(mass)
            for y, v in zip(ys, vs):
                factor = (1 - y * y) if kind == "lobatto" else (1 - endpoint * y)
                nodes.append(y)
                weights.append(mass_f * v / factor)
        rest = 1 - mp.fsum(weights)
        if kind == "lobatto":
            first = _q(m[1]) - mp.fsum(w * y for w, y in zip(weights, nodes))
            w_left, w_right = (rest - first) / 2, (rest + first) / 2
            nodes = [mp.mpf(-1)] + nodes + [mp.mpf(1)]
            weights = [w_left] + weights + [w_right]
        elif endpoint == -1:
            nodes = [mp.mpf(-1)] + nodes
            weights = [rest] + weights
        else:
            nodes = nodes + [mp.mpf(1)]
            weights = weights + [rest]
    return Formula(
        measure,
        tuple((x,) for x in nodes),
        tuple(weights),
        claimed_degree=t,
        provenance=f"{kind} {measure.label} t={t}",
        precision=precision_bits,
    )


def legendre_measure() -> SpaceDescriptor:
    return jacobi_interval(0, 0)


__all__ = [
    "OrthoPoly",
    "gauss_quadrature",
    "highest_jacobi_zero",
    "jacobi_christoffel_weight",
    "jacobi_evaluate",
    "jacobi_leading",
    "jacobi_norm_squared",
    "jacobi_poly",
    "jacobi_zeros",
    "legendre_measure",
    "lobatto_radau_quadrature",
    "recurrence_from_moments",
]
