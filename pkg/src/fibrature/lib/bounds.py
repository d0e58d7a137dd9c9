"""Lower bounds on formula sizes, Gauss-interval and covering checks."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from time import perf_counter
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Set, Tuple

import mpmath
import numpy as np
import numpy.typing as npt
import pandas as pd
from mpmath import mp
from scipy.stats import qmc

from fibrature.lib.config import (
    DEFAULT_EPSNET_SAMPLES,
    DEFAULT_FLOAT_TOL,
    DEFAULT_ORBIT_CAP,
    DEFAULT_PRECISION_BITS,
    DEFAULT_SEED,
)
from fibrature.lib.errors import PreconditionError, SearchCapError
from fibrature.lib.exact import to_mpf
from fibrature.lib.formula import Formula, classify
from fibrature.lib.measures import SpaceDescriptor
from fibrature.lib.orthopoly import gauss_quadrature, highest_jacobi_zero, jacobi_christoffel_weight
from fibrature.lib.verify import character_norm, enumerate_characters, verify

EPSNET_RELATIVE_TOL = 1e-9
INTERVAL_KINDS = ("jacobi_interval", "tabulated_interval")


class ChristoffelFit(NamedTuple):
    table: pd.DataFrame
    slope: float
    plain_slope: float


@dataclass(frozen=True)
class BoundReport:
    name: str
    space: str
    degree: int
    value: int
    formula_size: Optional[int] = None
    asymptotic: Optional[float] = None

    @property
    def slack(self) -> Optional[float]:
        """|F| / bound, or None without a formula."""

        if self.formula_size is None:
            return None
        return self.formula_size / self.value

    @property
    def satisfied(self) -> bool:
        return self.formula_size is None or self.formula_size >= self.value

    def to_row(self) -> Dict[str, Any]:
        return {
            "bound": self.name,
            "space": self.space,
            "degree": self.degree,
            "value": self.value,
            "formula_size": self.formula_size,
            "slack": self.slack,
            "asymptotic": self.asymptotic,
        }


# ---------------------------------------------------------------------------
# closed forms


def _check_even(two_t: int) -> int:
    if two_t < 0 or two_t % 2:
        raise ValueError(f"Stroud bounds take an even degree, got {two_t}; floor odd degrees first.")
    return two_t // 2


def stroud_bound(space: SpaceDescriptor, two_t: int) -> int:
    """dim of the polynomials of degree <= t on ``space``, for a formula of degree 2t."""

    t = _check_even(two_t)
    kind = space.kind
    if kind in ("simplex", "corner_simplex", "ball", "gaussian", "exponential_orthant"):
        return math.comb(space.dim + t, t)
    if kind == "sphere":
        n = space.dim
        return math.comb(n + t - 1, t) + (math.comb(n + t - 2, t - 1) if t else 0)
    if kind in INTERVAL_KINDS:
        return t + 1
    if kind == "trig_torus":
        return len(enumerate_characters(space.dim, t, space.norm or "l1"))
    raise ValueError(f"No Stroud bound for {space.label}.")


def moller_sphere_bound(n: int, degree: int) -> int:
    """2 binom(n-1+t, t) for a (2t+1)-formula.

    With ``n`` the dimension of the sphere S^n this is the form quoted for
    S^n; with ``n`` the ambient dimension of S^(n-1) it is the sharp bound
    met by the E8 roots. space_bound_reports passes the ambient dimension.
    """

    if degree < 1 or degree % 2 == 0:
        raise ValueError(f"The Moller bound takes an odd degree, got {degree}.")
    t = (degree - 1) // 2
    return 2 * math.comb(n - 1 + t, t)


def cpn_bound(n: int, t: int) -> int:
    """binom(n+t, n) binom(n+t+1, n) for a (2t+1)-formula on CP^n."""

    if n < 0 or t < 0:
        raise ValueError(f"Need n >= 0 and t >= 0, got n={n}, t={t}.")
    return math.comb(n + t, n) * math.comb(n + t + 1, n)


def _compositions(parts: int, total: int) -> List[Dict[int, int]]:
    result = []
    for multiset in itertools.combinations_with_replacement(range(parts), total):
        counts: Dict[int, int] = {}
        for index in multiset:
            counts[index] = counts.get(index, 0) + 1
        result.append(counts)
    return result


def psu_torus_bound(n: int, t: int, *, cap: int = DEFAULT_ORBIT_CAP) -> int:
    """|Delta^(ceil t/2) - Delta^(floor t/2)| over the nonnegative integer vectors of Z^(n+1).

    Delta^(s) holds the vectors with coordinate sum s; differences are
    hashed in sparse form.
    """

    if n < 1 or t < 0:
        raise ValueError(f"Need n >= 1 and t >= 0, got n={n}, t={t}.")
    upper = _compositions(n + 1, (t + 1) // 2)
    lower = _compositions(n + 1, t // 2)
    if len(upper) * len(lower) > cap:
        raise SearchCapError(f"{len(upper) * len(lower)} differences exceed the cap of {cap}.", cap=cap)
    seen: Set[Tuple[Tuple[int, int], ...]] = set()
    for a in upper:
        for b in lower:
            diff = dict(a)
            for index, count in b.items():
                diff[index] = diff.get(index, 0) - count
            seen.add(tuple(sorted((i, v) for i, v in diff.items() if v)))
    return len(seen)


def psu_torus_asymptotic(n: int, t: int) -> float:
    return n**t / (math.factorial((t + 1) // 2) * math.factorial(t // 2))


def torus_moller_bound(n: int, t: int) -> int:
    """2 #{k in Z^n : |k|_1 <= t, |k|_1 = t mod 2}, for a (2t+1)-formula on T^n."""

    return 2 * sum(1 for k in enumerate_characters(n, t) if (character_norm(k, "l1") - t) % 2 == 0)


def stroud_mysovskikh_check(n: int, t: int, formula_size: Optional[int] = None, *, odd: bool = False) -> BoundReport:
    """Exact torus bound for degree 2t (or 2t+1 with ``odd``) next to (2n)^t / t!."""

    if odd:
        value = torus_moller_bound(n, t)
        return BoundReport(
            "moller-torus",
            f"trig_torus({n})",
            2 * t + 1,
            value,
            formula_size,
            2 * (2 * n) ** t / math.factorial(t),
        )
    value = len(enumerate_characters(n, t))
    return BoundReport("stroud-torus", f"trig_torus({n})", 2 * t, value, formula_size, (2 * n) ** t / math.factorial(t))


def space_bound_reports(space: SpaceDescriptor, degree: int, size: Optional[int] = None) -> List[BoundReport]:
    """Every lower bound that applies to ``degree`` formulas on ``space``."""

    if degree < 0:
        raise ValueError(f"Degree must be >= 0, got {degree}.")
    d = degree
    even = 2 * (d // 2)
    reports: List[BoundReport] = []
    if space.kind == "complex_projective":
        t = max(0, (d - 1) // 2)
        return [BoundReport("cpn", space.label, 2 * t + 1, cpn_bound(space.dim, t), size)]
    if space.kind == "trig_torus":
        if space.norm == "an_root":
            return [
                BoundReport("stroud", space.label, even, stroud_bound(space, even), size),
                BoundReport("psu-torus", space.label, d, psu_torus_bound(space.dim, d), size, psu_torus_asymptotic(space.dim, d)),
            ]
        reports.append(stroud_mysovskikh_check(space.dim, d // 2, size))
        if d % 2:
            reports.append(stroud_mysovskikh_check(space.dim, d // 2, size, odd=True))
        return reports
    reports.append(BoundReport("stroud", space.label, even, stroud_bound(space, even), size))
    if space.kind == "sphere" and d % 2:
        reports.append(BoundReport("moller-sphere", space.label, d, moller_sphere_bound(space.dim, d), size))
    return reports


def bound_reports(formula: Formula, degree: Optional[int] = None) -> List[BoundReport]:
    """Every bound that applies on the formula's space, compared with its size."""

    d = formula.claimed_degree if degree is None else degree
    if d is None:
        raise ValueError("A degree is needed: the formula claims none.")
    return space_bound_reports(formula.space, d, len(formula))


# ---------------------------------------------------------------------------
# Gauss intervals


def _require_degree(f: Formula, degree: int, tol: float, log: logging.Logger) -> None:
    mode = "exact" if f.is_exact else "float"
    report = verify(f, degree, mode, None if f.is_exact else tol, logger=log)
    if not report.passed:
        raise PreconditionError(
            f"Formula fails its degree {degree} claim (first failure at degree {report.first_failing_degree()})."
        )


@dataclass
class SharpReport:
    degree: int
    nodes: List[mpmath.mpf]
    gauss_weights: List[mpmath.mpf]
    left_occupied: List[bool] = field(default_factory=list)
    right_occupied: List[bool] = field(default_factory=list)
    left_tail: Optional[mpmath.mpf] = None
    right_tail: Optional[mpmath.mpf] = None
    tolerance: float = DEFAULT_FLOAT_TOL

    @property
    def violations(self) -> List[str]:
        found = [f"no point in (p_{k}, p_{k + 1}]" for k, ok in enumerate(self.left_occupied) if not ok]
        found += [f"no point in [p_{k + 1}, p_{k + 2})" for k, ok in enumerate(self.right_occupied) if not ok]
        if self.left_tail is not None and self.left_tail > self.gauss_weights[0] + self.tolerance:
            found.append(f"left tail weight {mpmath.nstr(self.left_tail, 12)} exceeds w_1")
        if self.right_tail is not None and self.right_tail > self.gauss_weights[-1] + self.tolerance:
            found.append(f"right tail weight {mpmath.nstr(self.right_tail, 12)} exceeds w_m")
        return found

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "nodes": [mpmath.nstr(x, 20) for x in self.nodes],
            "gauss_weights": [mpmath.nstr(w, 20) for w in self.gauss_weights],
            "left_tail": mpmath.nstr(self.left_tail, 20) if self.left_tail is not None else None,
            "right_tail": mpmath.nstr(self.right_tail, 20) if self.right_tail is not None else None,
            "passed": self.passed,
            "violations": self.violations,
        }


def sharp_check(
    f: Formula,
    t: int,
    *,
    tol: float = DEFAULT_FLOAT_TOL,
    precision: int = DEFAULT_PRECISION_BITS,
    logger: Optional[logging.Logger] = None,
) -> SharpReport:
    """Compare a positive degree-t quadrature with the (t+1)//2-point Gauss rule.

    Each interval (p_(k-1), p_k] and [p_k, p_(k+1)) (with p_0 = -inf and
    p_(m+1) = +inf) must hold a point, and the weight at or beyond the outer
    Gauss nodes may not exceed the outer Gauss weights.
    """

    log = logger or logging.getLogger(__name__)
    if f.space.kind not in INTERVAL_KINDS:
        raise ValueError(f"Sharpness checks need an interval measure, got {f.space.label}.")
    if t < 1:
        raise ValueError(f"Degree must be >= 1, got {t}.")
    flags = classify(f)
    if not flags.positive:
        raise PreconditionError("Sharpness checks need positive weights.")
    _require_degree(f, t, tol, log)
    m = (t + 1) // 2
    gauss = gauss_quadrature(f.space, m, precision, logger=log)
    with mp.workprec(precision):
        nodes = [to_mpf(p[0]) for p in gauss.points]
        weights = [to_mpf(w) for w in gauss.weights]
        xs = [to_mpf(p[0]) for p in f.points]
        ws = [to_mpf(w) for w in f.weights]
        eps = mp.mpf(tol)
        lows = [mp.ninf] + nodes
        highs = nodes + [mp.inf]
        report = SharpReport(t, nodes, weights, tolerance=tol)
        report.left_occupied = [
            any(lows[k] + eps < x <= highs[k] + eps for x in xs) for k in range(m)
        ]
        report.right_occupied = [
            any(lows[k + 1] - eps <= x < highs[k + 1] - eps for x in xs) for k in range(m)
        ]
        report.left_tail = mp.fsum(w for x, w in zip(xs, ws) if x <= nodes[0] + eps)
        report.right_tail = mp.fsum(w for x, w in zip(xs, ws) if x >= nodes[-1] - eps)
    if not report.passed:
        log.warning("Sharpness check at degree %d found: %s", t, "; ".join(report.violations))
    return report


# ---------------------------------------------------------------------------
# covering


def simplex_distance(p: Sequence[Any], q: Sequence[Any]) -> mpmath.mpf:
    """arccos(sum sqrt(p_i q_i)): the spherical distance after the square-root map to the orthant."""

    if len(p) != len(q):
        raise ValueError(f"Points have {len(p)} and {len(q)} coordinates.")
    inner = mp.fsum(mp.sqrt(to_mpf(a) * to_mpf(b)) for a, b in zip(p, q))
    return mp.acos(min(mp.mpf(1), max(mp.mpf(-1), inner)))


def covering_radius(n: int, t: int, precision: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
    """epsilon with cos 2 epsilon the highest zero of P_t^(n-1, 0)."""

    if n < 1:
        raise ValueError(f"Simplex dimension must be >= 1, got {n}.")
    with mp.workprec(precision):
        return mp.acos(highest_jacobi_zero(n - 1, 0, t, precision)) / 2


@dataclass(frozen=True)
class EpsNetReport:
    epsilon: mpmath.mpf
    highest_zero: mpmath.mpf
    worst_distance: float
    covered: bool
    samples: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "epsilon": mpmath.nstr(self.epsilon, 20),
            "highest_zero": mpmath.nstr(self.highest_zero, 20),
            "worst_distance": self.worst_distance,
            "covered": self.covered,
            "samples": self.samples,
        }


def simplex_samples(n: int, count: int, seed: int = DEFAULT_SEED) -> npt.NDArray[np.float64]:
    """Scrambled Halton points mapped to the n-simplex by sorted spacings, plus its vertices."""

    if n == 0:
        return np.ones((1, 1))
    cube = qmc.Halton(d=n, scramble=True, seed=seed).random(count)
    cuts = np.sort(cube, axis=1)
    padded = np.hstack([np.zeros((count, 1)), cuts, np.ones((count, 1))])
    spacings = np.diff(padded, axis=1)
    return np.vstack([spacings, np.eye(n + 1)])


def _worst_gap(samples: npt.NDArray[np.float64], nodes: npt.NDArray[np.float64], chunk: int = 4096) -> float:
    roots = np.sqrt(np.clip(nodes, 0.0, None)).T
    worst = 0.0
    for start in range(0, samples.shape[0], chunk):
        block = np.sqrt(np.clip(samples[start : start + chunk], 0.0, None))
        inner = np.clip(block @ roots, -1.0, 1.0)
        nearest = np.arccos(inner.max(axis=1))
        worst = max(worst, float(nearest.max()))
    return worst


def epsnet_check(
    f: Formula,
    degree: int,
    samples: int = DEFAULT_EPSNET_SAMPLES,
    seed: int = DEFAULT_SEED,
    *,
    tol: float = DEFAULT_FLOAT_TOL,
    precision: int = DEFAULT_PRECISION_BITS,
    logger: Optional[logging.Logger] = None,
) -> EpsNetReport:
    """Sampled check that the nodes of a positive (2t-1)-formula on the n-simplex form an epsilon-net."""

    log = logger or logging.getLogger(__name__)
    if f.space.kind != "simplex":
        raise ValueError(f"epsilon-net checks need a simplex formula, got {f.space.label}.")
    if degree < 1 or degree % 2 == 0:
        raise ValueError(f"epsilon-net checks take an odd degree 2t-1, got {degree}.")
    flags = classify(f)
    if flags.code not in ("PI", "PB", "EI", "EB"):
        raise PreconditionError(f"epsilon-net checks need a positive formula in the simplex, got class {flags.code}.")
    _require_degree(f, degree, tol, log)
    n = f.space.dim
    t = (degree + 1) // 2
    t0 = perf_counter()
    with mp.workprec(precision):
        top = highest_jacobi_zero(n - 1, 0, t, precision)
        epsilon = mp.acos(top) / 2
    nodes = np.array([[float(to_mpf(c)) for c in p] for p in f.points], dtype=np.float64)
    points = simplex_samples(n, samples, seed)
    worst = _worst_gap(points, nodes)
    covered = worst <= float(epsilon) * (1 + EPSNET_RELATIVE_TOL)
    log.info(
        "Covering check finished in %.2f s (%d samples, worst gap %.6g, epsilon %.6g).",
        perf_counter() - t0,
        points.shape[0],
        worst,
        float(epsilon),
    )
    return EpsNetReport(epsilon, top, worst, covered, int(points.shape[0]))


# ---------------------------------------------------------------------------
# Christoffel weights


def christoffel_scaling(
    n: int,
    t_list: Sequence[int],
    *,
    precision: int = DEFAULT_PRECISION_BITS,
    logger: Optional[logging.Logger] = None,
) -> ChristoffelFit:
    """Least Gauss weight of the Jacobi(n-1, 0) measure for each t, and its log-log slopes.

    ``slope`` is fitted against log(t + n/2), the natural Jacobi variable
    t + (a + b + 1)/2; ``plain_slope`` against log t.
    """

    log = logger or logging.getLogger(__name__)
    ts = list(t_list)
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise ValueError(f"Degrees must increase, got {ts}.")
    if len(ts) < 2:
        raise ValueError("A slope needs at least two degrees.")
    t0 = perf_counter()
    rows = []
    with mp.workprec(precision):
        for t in ts:
            node = highest_jacobi_zero(n - 1, 0, t, precision)
            weight = jacobi_christoffel_weight(n - 1, 0, t, node, precision)
            rows.append(
                {
                    "t": t,
                    "node": float(node),
                    "weight": float(weight),
                    "log_t": float(mp.log(t)),
                    "log_n": float(mp.log(mp.mpf(2 * t + n) / 2)),
                    "log_weight": float(mp.log(weight)),
                }
            )
    table = pd.DataFrame(rows)
    slope = float(np.polyfit(table["log_n"], table["log_weight"], 1)[0])
    plain_slope = float(np.polyfit(table["log_t"], table["log_weight"], 1)[0])
    log.info(
        "Christoffel scaling finished in %.2f s (n=%d, slope %.3f, against t %.3f).",
        perf_counter() - t0,
        n,
        slope,
        plain_slope,
    )
    return ChristoffelFit(table, slope, plain_slope)


__all__ = [
    "BoundReport",
    "ChristoffelFit",
    "EpsNetReport",
    "SharpReport",
    "bound_reports",
    "christoffel_scaling",
    "covering_radius",
    "cpn_bound",
    "epsnet_check",
    "moller_sphere_bound",
    "psu_torus_asymptotic",
    "psu_torus_bound",
    "sharp_check",
    "simplex_distance",
    "simplex_samples",
    "space_bound_reports",
    "stroud_bound",
    "stroud_mysovskikh_check",
    "torus_moller_bound",
]
