"""The Formula type, its JSON form, and the bookkeeping around it."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from time import perf_counter
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp

from fibrature.lib.config import DEFAULT_ORBIT_CAP, DEFAULT_PRECISION_BITS
from fibrature.lib.errors import FormulaFormatError, OrbitCapError, ScalarFieldError
from fibrature.lib.exact import (
    Scalar,
    conjugate_scalar,
    format_scalar,
    parse_scalar,
    scalar_sign,
    scalar_tag,
    to_mpf,
)
from fibrature.lib.measures import SpaceDescriptor

Point = Tuple[Scalar, ...]


@dataclass(frozen=True)
class Formula:
    """A weighted point set on a space, with the degree it claims."""

    space: SpaceDescriptor
    points: Tuple[Point, ...]
    weights: Tuple[Scalar, ...]
    claimed_degree: Optional[int] = None
    provenance: str = ""
    precision: Optional[int] = None
    scalar: str = field(init=False, compare=False)

    def __post_init__(self) -> None:
        points = tuple(tuple(p) for p in self.points)
        weights = tuple(self.weights)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)
        if len(points) != len(weights):
            raise ValueError(f"{len(points)} points but {len(weights)} weights.")
        width = self.space.coordinate_count
        for index, point in enumerate(points):
            if len(point) != width:
                raise ValueError(
                    f"Point {index} has {len(point)} coordinates, {self.space.label} needs {width}."
                )
        tag = scalar_tag(value for point in points for value in point)
        tag_w = scalar_tag(weights)
        if tag == "float" or tag_w == "float":
            merged = "float"
        elif tag.startswith("quadratic") and tag_w.startswith("quadratic") and tag != tag_w:
            raise ScalarFieldError(f"Points live in {tag} but weights in {tag_w}.")
        else:
            merged = tag if tag != "rational" else tag_w
        object.__setattr__(self, "scalar", merged)
        if merged == "float" and self.precision is None:
            object.__setattr__(self, "precision", mp.prec if mp.prec >= 64 else DEFAULT_PRECISION_BITS)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def is_exact(self) -> bool:
        return self.scalar != "float"

    def weight_sum(self) -> Scalar:
        total: Scalar = Fraction(0)
        for w in self.weights:
            total = total + w
        return total

    def with_claim(self, degree: Optional[int], provenance: Optional[str] = None) -> "Formula":
        return replace(
            self,
            claimed_degree=degree,
            provenance=self.provenance if provenance is None else provenance,
        )

    def to_mpf(self) -> Tuple[List[List[mpmath.mpf]], List[mpmath.mpf]]:
        """Coordinates and weights converted to bigfloats at the current precision."""

        return (
            [[to_mpf(c) for c in point] for point in self.points],
            [to_mpf(w) for w in self.weights],
        )

    def to_json(self) -> Dict[str, Any]:
        precision = self.precision if self.scalar == "float" else None
        payload: Dict[str, Any] = {
            "space": self.space.to_json(),
            "scalar": self.scalar,
            "points": [[format_scalar(c, precision=precision) for c in p] for p in self.points],
            "weights": [format_scalar(w, precision=precision) for w in self.weights],
            "claimed_degree": self.claimed_degree,
            "provenance": self.provenance,
        }
        if precision is not None:
            payload["precision"] = precision
        return payload

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "Formula":
        if not isinstance(payload, dict):
            raise FormulaFormatError("A formula document must be a JSON object.")
        try:
            space = SpaceDescriptor.from_json(payload["space"])
            tag = payload.get("scalar", "rational")
            precision = payload.get("precision")
            if tag == "float" and precision is None:
                precision = DEFAULT_PRECISION_BITS
            with mp.workprec(precision or mp.prec):
                points = [
                    tuple(parse_scalar(c, tag=tag, precision=precision) for c in p)
                    for p in payload["points"]
                ]
                weights = [parse_scalar(w, tag=tag, precision=precision) for w in payload["weights"]]
            degree = payload.get("claimed_degree")
            return cls(
                space,
                tuple(points),
                tuple(weights),
                claimed_degree=None if degree is None else int(degree),
                provenance=str(payload.get("provenance", "")),
                precision=precision,
            )
        except FormulaFormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise FormulaFormatError(f"Malformed formula document: {exc}") from exc


def _float_key(value: Scalar, digits: int) -> str:
    return mpmath.nstr(to_mpf(value), digits)


def point_key(point: Sequence[Scalar], *, exact: bool, digits: int = 30) -> Hashable:
    if exact:
        return tuple(point)
    return tuple(_float_key(c, digits) for c in point)


def merge_duplicates(f: Formula, *, digits: int = 30) -> Formula:
    """Merge equal points (summing weights) and drop zero weights.

    Exact formulas compare coordinates exactly; float formulas compare them
    after rounding to ``digits`` significant digits.
    """

    exact = f.is_exact
    order: List[Hashable] = []
    merged: Dict[Hashable, Tuple[Point, Scalar]] = {}
    for point, weight in zip(f.points, f.weights):
        key = point_key(point, exact=exact, digits=digits)
        if key in merged:
            kept, total = merged[key]
            merged[key] = (kept, total + weight)
        else:
            merged[key] = (point, weight)
            order.append(key)
    points: List[Point] = []
    weights: List[Scalar] = []
    negligible = mpmath.mpf(10) ** (-digits)
    for key in order:
        point, weight = merged[key]
        vanishes = scalar_sign(weight) == 0 if exact else abs(to_mpf(weight)) < negligible
        if vanishes:
            continue
        points.append(point)
        weights.append(weight)
    return replace(f, points=tuple(points), weights=tuple(weights))


@dataclass(frozen=True)
class SignedPermutation:
    """Send coordinate i to position perm[i], multiplied by signs[i].

    With ``conjugate`` set the map also applies the Galois conjugation of the
    quadratic field to coordinates and weights.
    """

    perm: Tuple[int, ...]
    signs: Tuple[int, ...] = ()
    conjugate: bool = False

    def __post_init__(self) -> None:
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)):
            raise ValueError(f"{self.perm} is not a permutation of 0..{n - 1}.")
        if not self.signs:
            object.__setattr__(self, "signs", (1,) * n)
        if len(self.signs) != n or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"Signs {self.signs} must be +-1 for each of {n} coordinates.")

    @classmethod
    def from_cycles(
        cls,
        n: int,
        cycles: Iterable[Sequence[int]] = (),
        *,
        signs: Optional[Sequence[int]] = None,
        conjugate: bool = False,
    ) -> "SignedPermutation":
        perm = list(range(n))
        for cycle in cycles:
            for position, source in enumerate(cycle):
                perm[source] = cycle[(position + 1) % len(cycle)]
        return cls(tuple(perm), tuple(signs) if signs else (), conjugate)

    @classmethod
    def identity(cls, n: int, *, conjugate: bool = False) -> "SignedPermutation":
        return cls(tuple(range(n)), (), conjugate)

    def apply(self, point: Sequence[Scalar]) -> Point:
        image: List[Scalar] = [Fraction(0)] * len(point)
        for source, target in enumerate(self.perm):
            value = point[source]
            if self.conjugate:
                value = conjugate_scalar(value)
            image[target] = value if self.signs[source] == 1 else -value
        return tuple(image)

    def apply_weight(self, weight: Scalar) -> Scalar:
        return conjugate_scalar(weight) if self.conjugate else weight


def close_orbit(
    seeds: Iterable[Hashable],
    operations: Sequence[Callable[[Any], Any]],
    *,
    cap: int = DEFAULT_ORBIT_CAP,
) -> List[Any]:
    """Breadth-first closure of ``seeds`` under ``operations`` (first-seen order)."""

    seen: Dict[Hashable, None] = {}
    queue: deque = deque()
    for seed in seeds:
        if seed not in seen:
            seen[seed] = None
            queue.append(seed)
    while queue:
        item = queue.popleft()
        for operation in operations:
            image = operation(item)
            if image is None or image in seen:
                continue
            seen[image] = None
            if len(seen) > cap:
                raise OrbitCapError(f"Orbit closure exceeded the cap of {cap} elements.")
            queue.append(image)
    return list(seen)


def orbit_symmetrize(
    seed_points: Sequence[Sequence[Scalar]],
    seed_weights: Sequence[Scalar],
    generators: Sequence[SignedPermutation],
    *,
    space: SpaceDescriptor,
    claimed_degree: Optional[int] = None,
    provenance: str = "",
    cap: int = DEFAULT_ORBIT_CAP,
    logger: Optional[logging.Logger] = None,
) -> Formula:
    """Close each weighted seed under the group generated by ``generators``."""

    log = logger or logging.getLogger(__name__)
    width = space.coordinate_count
    for g in generators:
        if len(g.perm) != width:
            raise ValueError(f"Generator {g.perm} acts on {len(g.perm)} coordinates, expected {width}.")

    t0 = perf_counter()
    points: List[Point] = []
    weights: List[Scalar] = []
    owner: Dict[Point, int] = {}
    for index, (seed, weight) in enumerate(zip(seed_points, seed_weights)):
        start = (tuple(seed), weight)
        operations = [
            (lambda item, g=g: (g.apply(item[0]), g.apply_weight(item[1]))) for g in generators
        ]
        orbit = close_orbit([start], operations, cap=cap)
        for point, w in orbit:
            if point in owner:
                if owner[point] != index:
                    raise ValueError(f"Orbits of seeds {owner[point]} and {index} overlap.")
                raise ValueError(f"Point {point} carries two different weights in one orbit.")
            owner[point] = index
            points.append(point)
            weights.append(w)
        log.debug("Seed %d generated an orbit of %d points.", index, len(orbit))

    formula = Formula(space, tuple(points), tuple(weights), claimed_degree, provenance)
    total = formula.weight_sum()
    if formula.is_exact and total != 1:
        log.warning("Symmetrized weights sum to %s, not 1.", format_scalar(total))
    log.debug(
        "Orbit symmetrization finished in %.2f s (%d seeds, %d points).",
        perf_counter() - t0,
        len(seed_points),
        len(points),
    )
    return formula


@dataclass(frozen=True)
class ClassifyFlags:
    positive: bool
    negative: bool
    equal_weight: bool
    interior: bool
    boundary: bool
    exterior: bool

    @property
    def code(self) -> str:
        """Two-letter class: PI, PB, EI, EB or exterior/negative markers."""

        if self.exterior:
            return "exterior"
        if self.negative:
            return "negative"
        prefix = "E" if self.equal_weight else "P"
        return prefix + ("B" if self.boundary else "I")


def _compare(value: Scalar, target: Scalar, tol: mpmath.mpf | None) -> int:
    if tol is None:
        return scalar_sign(value - target)
    diff = to_mpf(value) - to_mpf(target)
    if abs(diff) <= tol:
        return 0
    return 1 if diff > 0 else -1


def _location(space: SpaceDescriptor, point: Point, tol: mpmath.mpf | None, radius: Scalar | None) -> str:
    kind = space.kind
    signs = [_compare(c, 0, tol) for c in point]
    if kind in ("simplex", "corner_simplex", "exponential_orthant"):
        if any(s < 0 for s in signs):
            return "exterior"
        on_face = any(s == 0 for s in signs)
        total: Scalar = Fraction(0)
        for c in point:
            total = total + c
        if kind == "simplex":
            if _compare(total, 1, tol) != 0:
                return "exterior"
        elif kind == "corner_simplex":
            side = _compare(total, 1, tol)
            if side > 0:
                return "exterior"
            on_face = on_face or side == 0
        return "boundary" if on_face else "interior"
    if kind in ("ball", "jacobi_interval", "tabulated_interval"):
        squared: Scalar = Fraction(0)
        for c in point:
            squared = squared + c * c
        side = _compare(squared, 1, tol)
        return "exterior" if side > 0 else ("boundary" if side == 0 else "interior")
    if kind == "sphere" and radius is not None:
        squared = Fraction(0)
        for c in point:
            squared = squared + c * c
        return "interior" if _compare(squared, radius, tol) == 0 else "exterior"
    return "interior"


def classify(f: Formula, *, tol: float | None = None) -> ClassifyFlags:
    """Positivity and location flags.

    Spheres, tori, Gaussian space and projective space have no boundary; a
    sphere formula counts as interior when all its points share one radius.
    """

    threshold = None
    if not f.is_exact:
        bits = f.precision or mp.prec
        threshold = mp.mpf(tol) if tol is not None else mp.mpf(2) ** (-(bits - 16))
    with mp.workprec(f.precision or mp.prec):
        signs = [_compare(w, 0, threshold) for w in f.weights]
        radius = None
        if f.space.kind == "sphere" and f.points:
            radius = Fraction(0)
            for c in f.points[0]:
                radius = radius + c * c
        locations = [_location(f.space, p, threshold, radius) for p in f.points]
        first = f.weights[0] if f.weights else Fraction(0)
        equal = all(_compare(w, first, threshold) == 0 for w in f.weights)
    exterior = "exterior" in locations
    return ClassifyFlags(
        positive=all(s > 0 for s in signs),
        negative=any(s < 0 for s in signs),
        equal_weight=equal,
        interior=all(loc == "interior" for loc in locations),
        boundary=not exterior and "boundary" in locations,
        exterior=exterior,
    )


__all__ = [
    "ClassifyFlags",
    "Formula",
    "Point",
    "SignedPermutation",
    "classify",
    "close_orbit",
    "merge_duplicates",
    "orbit_symmetrize",
    "point_key",
]
