"""Fiber maps between spaces and the twisted products that lift formulas along them.

The quadratic maps push formulas down: tau1 and tau2 square coordinates
(singly or in consecutive pairs), the Hopf map sends a vector of C^n to its
complex line, the moment map sends a line to the squared moduli of its
coordinates. Twisted products go the other way: every point of a simplex
(or corner simplex, or exponential orthant) formula is replaced by a torus
design on its fiber.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from time import perf_counter
from typing import Any, Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

import mpmath
from mpmath import mp
from sympy import nextprime

from fibrature.lib.catalog import named_formula
from fibrature.lib.config import DEFAULT_ORBIT_CAP, DEFAULT_PRECISION_BITS
from fibrature.lib.designs import hadamard_simplex_formula
from fibrature.lib.errors import MissingFiberDesignError, OrbitCapError, PreconditionError, ScalarFieldError
from fibrature.lib.exact import QuadraticScalar, Scalar, is_exact, scalar_sign, sqrt_rational, to_mpf
from fibrature.lib.formula import Formula, Point, classify, merge_duplicates, point_key
from fibrature.lib.measures import (
    SpaceDescriptor,
    ball,
    complex_projective,
    corner_simplex,
    exponential_orthant,
    gaussian,
    jacobi_interval,
    simplex,
    sphere,
    uniform_interval,
)
from fibrature.lib.orthopoly import lobatto_radau_quadrature
from fibrature.lib.roots import ComplexVectorSet
from fibrature.lib.torus import TorusDesign, circle_design, craig_lattice_zn, noskov_design, subgroup_points

FIBER_KINDS = ("moment_pi", "hopf", "tau1", "tau2", "archimedes")

# target kind -> (base kind, constructor of the 2n-dimensional target)
TWISTED_TARGETS: Dict[str, Tuple[str, Callable[[int], SpaceDescriptor]]] = {
    "sphere": ("simplex", sphere),
    "ball": ("corner_simplex", ball),
    "gaussian": ("exponential_orthant", gaussian),
}

PIPELINE_COUNTS: Dict[str, int] = {"ball4-7pt": 64, "gauss4-7pt": 190}


@dataclass(frozen=True)
class FiberMap:
    kind: str
    source: SpaceDescriptor
    target: SpaceDescriptor

    def degree_after(self, degree: Optional[int]) -> Optional[int]:
        """Degree a pushed-forward formula keeps.

        Pulling a degree-t polynomial back through tau2 or the Hopf map
        doubles its degree, so those maps halve the degree of a formula.
        tau1 sends the sphere measure to a Dirichlet(1/2) measure, not the
        uniform one, and carries no claim.
        """

        if degree is None or self.kind == "tau1":
            return None
        if self.kind in ("tau2", "hopf"):
            return degree // 2
        return degree


def fiber_map(kind: str, source: SpaceDescriptor) -> FiberMap:
    """The map of the given kind out of ``source``, with its target space."""

    if kind not in FIBER_KINDS:
        raise ValueError(f"Unknown fiber map {kind!r}; choose from {FIBER_KINDS}.")
    width = source.coordinate_count
    if kind == "tau2":
        if source.kind not in TWISTED_TARGETS.keys() or width % 2:
            raise ValueError(f"tau2 needs an even-dimensional sphere, ball or Gaussian space, got {source.label}.")
        n = width // 2
        if source.kind == "sphere":
            if n < 2:
                raise ValueError(f"tau2 on {source.label} would land on a point.")
            return FiberMap(kind, source, simplex(n - 1))
        if source.kind == "ball":
            return FiberMap(kind, source, corner_simplex(n))
        return FiberMap(kind, source, exponential_orthant(n))
    if kind == "tau1":
        if source.kind != "sphere" or width < 2:
            raise ValueError(f"tau1 needs a sphere of dimension >= 1, got {source.label}.")
        return FiberMap(kind, source, simplex(width - 1))
    if kind == "hopf":
        if source.kind != "sphere" or width % 2:
            raise ValueError(f"The Hopf map needs an odd-dimensional sphere, got {source.label}.")
        return FiberMap(kind, source, complex_projective(width // 2 - 1))
    if kind == "moment_pi":
        if source.kind != "complex_projective" or source.dim < 1:
            raise ValueError(f"The moment map needs CP^n with n >= 1, got {source.label}.")
        return FiberMap(kind, source, simplex(source.dim))
    if source.kind != "sphere" or width != 3:
        raise ValueError(f"The Archimedes projection needs the 2-sphere, got {source.label}.")
    return FiberMap(kind, source, jacobi_interval(0, 0))


def _squared(values: Iterable[Scalar]) -> Scalar:
    return sum(v * v for v in values)


def projector_key(point: Sequence[Scalar], *, exact: bool, digits: int = 30) -> Hashable:
    """Entries z_j conj(z_k) / |z|^2 (j <= k) of the projector onto the line of ``point``."""

    norm = _squared(point)
    half = len(point) // 2
    entries: List[Scalar] = []
    for j in range(half):
        a, b = point[2 * j], point[2 * j + 1]
        for k in range(j, half):
            c, d = point[2 * k], point[2 * k + 1]
            entries.append((a * c + b * d) / norm)
            entries.append((b * c - a * d) / norm)
    return point_key(entries, exact=exact, digits=digits)


def _square_root(value: Scalar) -> Scalar:
    if isinstance(value, Fraction):
        return sqrt_rational(value)
    return mp.sqrt(to_mpf(value))


def _push(fmap: FiberMap, point: Point) -> Point:
    kind = fmap.kind
    if kind == "tau2":
        pairs = [point[2 * j] ** 2 + point[2 * j + 1] ** 2 for j in range(len(point) // 2)]
        if fmap.source.kind != "sphere":
            return tuple(pairs)
        norm = sum(pairs)
        return tuple(value / norm for value in pairs)
    if kind == "tau1":
        norm = _squared(point)
        return tuple(c * c / norm for c in point)
    if kind == "moment_pi":
        norm = _squared(point)
        return tuple(
            (point[2 * j] ** 2 + point[2 * j + 1] ** 2) / norm for j in range(len(point) // 2)
        )
    if kind == "archimedes":
        radius = _square_root(_squared(point))
        height = point[2]
        if isinstance(radius, (Fraction, QuadraticScalar)) and is_exact(height):
            try:
                return (height / radius,)
            except ScalarFieldError:
                pass
        return (to_mpf(height) / to_mpf(radius),)
    return tuple(point)


def project_formula(
    f: Formula,
    fmap: FiberMap,
    *,
    digits: int = 30,
    logger: Optional[logging.Logger] = None,
) -> Formula:
    """Push ``f`` through ``fmap`` and merge points with a common image.

    Hopf images keep the first vector seen on each line as its representative.
    """

    log = logger or logging.getLogger(__name__)
    if f.space != fmap.source:
        raise ValueError(f"Formula lives on {f.space.label}, the {fmap.kind} map starts at {fmap.source.label}.")
    t0 = perf_counter()
    with mp.workprec(f.precision or mp.prec):
        if fmap.kind == "hopf":
            merged: Dict[Hashable, Tuple[Point, Scalar]] = {}
            for point, weight in zip(f.points, f.weights):
                key = projector_key(point, exact=f.is_exact, digits=digits)
                if key in merged:
                    kept, total = merged[key]
                    merged[key] = (kept, total + weight)
                else:
                    merged[key] = (tuple(point), weight)
            points = tuple(point for point, _ in merged.values())
            weights = tuple(weight for _, weight in merged.values())
            image = Formula(fmap.target, points, weights, precision=f.precision)
        else:
            points = tuple(_push(fmap, point) for point in f.points)
            image = merge_duplicates(
                Formula(fmap.target, points, f.weights, precision=f.precision), digits=digits
            )
    result = image.with_claim(fmap.degree_after(f.claimed_degree), f"{fmap.kind}({f.provenance})")
    log.debug(
        "Projection through %s finished in %.2f s (%d -> %d points).",
        fmap.kind,
        perf_counter() - t0,
        len(f),
        len(result),
    )
    return result


def hopf_lines(vectors: ComplexVectorSet, *, digits: int = 30) -> ComplexVectorSet:
    """Distinct complex lines spanned by ``vectors``, with the weight of every vector on a line."""

    exact = vectors.is_exact
    merged: Dict[Hashable, Tuple[Tuple[Scalar, ...], Scalar]] = {}
    for vector, weight in zip(vectors.vectors, vectors.equal_weights()):
        key = projector_key(vector, exact=exact, digits=digits)
        if key in merged:
            kept, total = merged[key]
            merged[key] = (kept, total + weight)
        else:
            merged[key] = (vector, weight)
    return ComplexVectorSet(
        vectors.ring,
        vectors.dim,
        tuple(vector for vector, _ in merged.values()),
        tuple(weight for _, weight in merged.values()),
        label=f"{vectors.label}-lines" if vectors.label else "lines",
    )


def hopf_lift(
    lines: ComplexVectorSet,
    t: int,
    *,
    precision: int = DEFAULT_PRECISION_BITS,
    logger: Optional[logging.Logger] = None,
) -> Formula:
    """Lift a projective t-design to a (2t+1)-formula on S^(2 dim - 1).

    Every representative is normalized and multiplied by the 2t + 2 phases
    exp(2 pi i j / (2t + 2)); each copy carries an equal share of its line's
    weight.
    """

    log = logger or logging.getLogger(__name__)
    if t < 0:
        raise ValueError(f"Degree must be >= 0, got {t}.")
    if not lines.vectors:
        raise ValueError("Cannot lift an empty line set.")
    count = 2 * t + 2
    t0 = perf_counter()
    points: List[Tuple[mpmath.mpf, ...]] = []
    weights: List[mpmath.mpf] = []
    with mp.workprec(precision):
        line_weights = [to_mpf(w) for w in lines.equal_weights()]
        total = mp.fsum(line_weights)
        phases = [(mp.cospi(mp.mpf(2 * j) / count), mp.sinpi(mp.mpf(2 * j) / count)) for j in range(count)]
        for vector, weight in zip(lines.vectors, line_weights):
            values = [to_mpf(c) for c in vector]
            scale = 1 / mp.sqrt(mp.fsum(c * c for c in values))
            if not mp.isfinite(scale):
                raise ValueError("Line representatives must be nonzero.")
            share = weight / total / count
            for cos, sin in phases:
                point: List[mpmath.mpf] = []
                for j in range(lines.dim):
                    a, b = values[2 * j] * scale, values[2 * j + 1] * scale
                    point.extend((a * cos - b * sin, a * sin + b * cos))
                points.append(tuple(point))
                weights.append(share)
    formula = Formula(
        sphere(2 * lines.dim),
        tuple(points),
        tuple(weights),
        claimed_degree=2 * t + 1,
        provenance=f"hopf lift t={t} of {lines.label or 'lines'}",
        precision=precision,
    )
    log.info(
        "Hopf lift finished in %.2f s (%d lines, %d points).",
        perf_counter() - t0,
        len(lines),
        len(formula),
    )
    return formula


# ---------------------------------------------------------------------------
# twisted products


@dataclass(frozen=True)
class FiberProfile:
    """For each base point, the coordinates where it vanishes."""

    zero_coordinates: Tuple[Tuple[int, ...], ...]
    width: int

    @property
    def generic(self) -> Tuple[bool, ...]:
        return tuple(not zeros for zeros in self.zero_coordinates)

    def support(self, index: int) -> Tuple[int, ...]:
        zeros = set(self.zero_coordinates[index])
        return tuple(i for i in range(self.width) if i not in zeros)

    def subtorus_dimensions(self) -> List[int]:
        """Dimensions of the nondegenerate subtori that occur (0 for the apex)."""

        return sorted({self.width - len(zeros) for zeros in self.zero_coordinates})


def fiber_profile(base: Formula) -> FiberProfile:
    exact = base.is_exact
    if not exact:
        bits = base.precision or mp.prec
        threshold = mp.mpf(2) ** (-(bits - 16))
    zeros = []
    for point in base.points:
        if exact:
            zeros.append(tuple(i for i, c in enumerate(point) if scalar_sign(c) == 0))
        else:
            zeros.append(tuple(i for i, c in enumerate(point) if abs(to_mpf(c)) <= threshold))
    return FiberProfile(tuple(zeros), base.space.coordinate_count)


def default_fiber_designs(
    dimensions: Iterable[int],
    s: int,
    *,
    cap: int = DEFAULT_ORBIT_CAP,
) -> Dict[int, TorusDesign]:
    """Torus designs of degree >= s on T(SO(2m)) for each requested m.

    Circles for m = 1, Noskov designs for m = 2, and for larger m the boosted
    Craig design in Z^m, with 2t + 1 the least odd degree >= s, over the
    smallest prime exceeding both 2m and 2t.
    """

    if s < 0:
        raise ValueError(f"Degree must be >= 0, got {s}.")
    designs: Dict[int, TorusDesign] = {}
    for m in sorted(set(dimensions)):
        if m < 1:
            continue
        if m == 1:
            designs[m] = circle_design(s)
        elif m == 2:
            designs[m] = noskov_design(max(1, math.ceil((s + 1) / 2)), "even")
        else:
            t = max(1, math.ceil((s - 1) / 2))
            p = int(nextprime(max(2 * m, 2 * t)))
            lattice = craig_lattice_zn(m, t, p, boost=True)
            if lattice.index > cap:
                raise OrbitCapError(
                    f"Craig fiber design on Z^{m} at degree {2 * t + 1} has {lattice.index} points, over the cap {cap}."
                )
            designs[m] = subgroup_points(
                lattice,
                degree=2 * t + 1,
                provenance=f"boosted craig Z^{m} t={t} p={p}",
            )
    return designs


def _trig_table(design: TorusDesign, offset: Fraction) -> Dict[Fraction, Tuple[mpmath.mpf, mpmath.mpf]]:
    table: Dict[Fraction, Tuple[mpmath.mpf, mpmath.mpf]] = {}
    for point in design.formula.points:
        for angle in point:
            if angle not in table:
                turn = 2 * (to_mpf(angle) + to_mpf(offset))
                table[angle] = (mp.cospi(turn), mp.sinpi(turn))
    return table


def _expand(
    point: Point,
    weight: Scalar,
    support: Tuple[int, ...],
    design: Optional[TorusDesign],
    offset: Fraction,
) -> List[Tuple[Tuple[mpmath.mpf, ...], mpmath.mpf]]:
    width = len(point)
    w = to_mpf(weight)
    if design is None:
        return [(tuple(mp.mpf(0) for _ in range(2 * width)), w)]
    radii = {j: mp.sqrt(to_mpf(point[j])) for j in support}
    table = _trig_table(design, offset)
    fiber = []
    for angles, share in zip(design.formula.points, design.formula.weights):
        coords = [mp.mpf(0)] * (2 * width)
        for j, angle in zip(support, angles):
            cos, sin = table[angle]
            coords[2 * j] = radii[j] * cos
            coords[2 * j + 1] = radii[j] * sin
        fiber.append((tuple(coords), w * to_mpf(share)))
    return fiber


def twisted_product(
    base: Formula,
    fiber_designs: Mapping[int, TorusDesign],
    s: int,
    *,
    target: str = "sphere",
    rotate: bool = False,
    precision: int = DEFAULT_PRECISION_BITS,
    workers: int = 1,
    logger: Optional[logging.Logger] = None,
) -> Formula:
    """Replace every base point by a torus design on its fiber under tau2.

    A point with m nonzero coordinates uses ``fiber_designs[m]`` on the
    corresponding coordinate planes; a point at the origin (ball, Gaussian)
    stays a single point. With ``rotate`` the k-th fiber is shifted by
    k / (|base| |design|) turns in every angle.
    """

    log = logger or logging.getLogger(__name__)
    if target not in TWISTED_TARGETS:
        raise ValueError(f"Unknown twisted product target {target!r}; choose from {tuple(TWISTED_TARGETS)}.")
    base_kind, make_target = TWISTED_TARGETS[target]
    if base.space.kind != base_kind:
        raise ValueError(f"A {target} twisted product needs a {base_kind} base, got {base.space.label}.")
    flags = classify(base)
    if flags.exterior or flags.negative:
        raise PreconditionError(f"Base formula must be positive with points in the domain, got class {flags.code}.")
    profile = fiber_profile(base)
    for m in profile.subtorus_dimensions():
        if m == 0:
            continue
        if m not in fiber_designs:
            raise MissingFiberDesignError(f"No torus design for T(SO({2 * m})) among {sorted(fiber_designs)}.")
        design = fiber_designs[m]
        space = design.formula.space
        if space.kind != "trig_torus" or space.norm != "l1" or space.dim != m:
            raise ValueError(f"Fiber design for m={m} lives on {space.label}, expected trig_torus({m}).")
        if design.degree < s:
            raise PreconditionError(f"Fiber design for m={m} has degree {design.degree} < {s}.")

    t0 = perf_counter()
    width = base.space.coordinate_count
    size = len(base)

    def expand(index: int) -> List[Tuple[Tuple[mpmath.mpf, ...], mpmath.mpf]]:
        support = profile.support(index)
        design = fiber_designs[len(support)] if support else None
        offset = Fraction(index, size * len(design)) if rotate and design is not None else Fraction(0)
        return _expand(base.points[index], base.weights[index], support, design, offset)

    with mp.workprec(precision):
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                fibers = list(pool.map(expand, range(size)))
        else:
            fibers = [expand(index) for index in range(size)]
    points = tuple(point for fiber in fibers for point, _ in fiber)
    weights = tuple(weight for fiber in fibers for _, weight in fiber)
    formula = Formula(
        make_target(2 * width),
        points,
        weights,
        claimed_degree=s,
        provenance=f"twisted product of {base.provenance or base.space.label} at degree {s}",
        precision=precision,
    )
    log.info(
        "Twisted product finished in %.2f s (%d base points, %d points, %d generic fibers).",
        perf_counter() - t0,
        size,
        len(formula),
        sum(profile.generic),
    )
    return formula


def ball_twisted_product(base: Formula, fiber_designs: Mapping[int, TorusDesign], s: int, **kwargs: Any) -> Formula:
    return twisted_product(base, fiber_designs, s, target="ball", **kwargs)


def gaussian_twisted_product(base: Formula, fiber_designs: Mapping[int, TorusDesign], s: int, **kwargs: Any) -> Formula:
    return twisted_product(base, fiber_designs, s, target="gaussian", **kwargs)


# ---------------------------------------------------------------------------
# named pipelines


def _report_count(name: str, achieved: int, expected: int, log: logging.Logger) -> None:
    if achieved != expected:
        log.warning("%s produced %d points, the closed form gives %d.", name, achieved, expected)
    else:
        log.info("%s produced the expected %d points.", name, achieved)


def s3_expected_count(s: int) -> int:
    if s % 2:
        return (s + 1) * (s * s + 3)
    return (s + 1) * (s * s + s + 2)


def s3_base(s: int, precision: int = DEFAULT_PRECISION_BITS) -> Formula:
    """Degree-s rule on the segment: Lobatto for odd s, left Radau for even s."""

    if s < 1:
        raise ValueError(f"The S^3 family starts at s = 1, got {s}.")
    kind = "lobatto" if s % 2 else "radau"
    rule = lobatto_radau_quadrature(uniform_interval(), s, kind, precision)
    with mp.workprec(precision):
        points = tuple(((1 + to_mpf(x)) / 2, (1 - to_mpf(x)) / 2) for (x,) in rule.points)
    return Formula(simplex(1), points, rule.weights, claimed_degree=s, provenance=f"{kind} s={s}", precision=precision)


def s3_family(
    s: int,
    *,
    precision: int = DEFAULT_PRECISION_BITS,
    logger: Optional[logging.Logger] = None,
) -> Formula:
    """(2s+1)-formula on S^3 over the Lobatto/Radau base of degree s."""

    log = logger or logging.getLogger(__name__)
    base = s3_base(s, precision)
    degree = 2 * s + 1
    designs = default_fiber_designs(fiber_profile(base).subtorus_dimensions(), degree)
    formula = twisted_product(base, designs, degree, precision=precision, logger=log)
    _report_count(f"S^3 family s={s}", len(formula), s3_expected_count(s), log)
    return formula.with_claim(degree, f"s3 family s={s}")


def sphere7_pipeline(
    n: int,
    *,
    precision: int = DEFAULT_PRECISION_BITS,
    workers: int = 1,
    logger: Optional[logging.Logger] = None,
) -> Formula:
    """7-formula on S^(2n-1) over the Hadamard 3-formula on the (n-1)-simplex."""

    log = logger or logging.getLogger(__name__)
    base = hadamard_simplex_formula(n)
    designs = default_fiber_designs(fiber_profile(base).subtorus_dimensions(), 7)
    formula = twisted_product(base, designs, 7, precision=precision, workers=workers, logger=log)
    log.info("Sphere pipeline n=%d: %d points, %.3f times 4n^4.", n, len(formula), len(formula) / (4 * n**4))
    return formula.with_claim(7, f"sphere7 n={n}")


def ball4_7pt(*, precision: int = DEFAULT_PRECISION_BITS, logger: Optional[logging.Logger] = None) -> Formula:
    log = logger or logging.getLogger(__name__)
    base = named_formula("triangle-pb3")
    designs = default_fiber_designs(fiber_profile(base).subtorus_dimensions(), 7)
    formula = ball_twisted_product(base, designs, 7, precision=precision, logger=log)
    _report_count("ball4-7pt", len(formula), PIPELINE_COUNTS["ball4-7pt"], log)
    return formula.with_claim(7, "ball4-7pt")


def gauss4_7pt(*, precision: int = DEFAULT_PRECISION_BITS, logger: Optional[logging.Logger] = None) -> Formula:
    """Gaussian formula on R^4 over the degree-4 exponential base; exact through degree 9."""

    log = logger or logging.getLogger(__name__)
    base = named_formula("exp2-pb4")
    degree = 2 * (base.claimed_degree or 0) + 1
    designs = default_fiber_designs(fiber_profile(base).subtorus_dimensions(), degree)
    formula = gaussian_twisted_product(base, designs, degree, precision=precision, logger=log)
    _report_count("gauss4-7pt", len(formula), PIPELINE_COUNTS["gauss4-7pt"], log)
    return formula.with_claim(degree, "gauss4-7pt")


__all__ = [
    "FIBER_KINDS",
    "FiberMap",
    "FiberProfile",
    "PIPELINE_COUNTS",
    "ball4_7pt",
    "ball_twisted_product",
    "default_fiber_designs",
    "fiber_map",
    "fiber_profile",
    "gauss4_7pt",
    "gaussian_twisted_product",
    "hopf_lift",
    "hopf_lines",
    "project_formula",
    "projector_key",
    "s3_base",
    "s3_expected_count",
    "s3_family",
    "sphere7_pipeline",
    "twisted_product",
]
