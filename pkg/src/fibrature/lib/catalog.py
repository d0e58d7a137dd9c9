"""Named cubature formulas with exact (or solved high-precision) data.

Each entry is built from seed points and a generating group, or from a
Steiner pattern, and claims the degree it is known for.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from time import perf_counter
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import pandas as pd
from mpmath import mp
from sympy import Rational, linsolve, symbols

from fibrature.lib.config import DEFAULT_PRECISION_BITS
from fibrature.lib.designs import steiner
from fibrature.lib.errors import ConvergenceError, UnavailableCatalogIdError, UnknownCatalogIdError
from fibrature.lib.exact import ExponentVector, Scalar, quadratic
from fibrature.lib.formula import Formula, SignedPermutation, close_orbit, orbit_symmetrize
from fibrature.lib.measures import (
    SpaceDescriptor,
    corner_simplex,
    exponential_orthant,
    moment,
    simplex,
    sphere,
)

UNAVAILABLE_IDS: Dict[str, str] = {
    "rains-leech-498": "498-point 5-cubature on the 11-simplex from Leech eigenplanes; point data is not published.",
}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    space: str
    degree: int
    description: str
    build: Callable[[], Formula]


def symmetric_generators(n: int) -> List[SignedPermutation]:
    """A transposition and an n-cycle, generating all coordinate permutations."""

    if n == 1:
        return []
    return [
        SignedPermutation.from_cycles(n, [(0, 1)]),
        SignedPermutation.from_cycles(n, [tuple(range(n))]),
    ]


def _frac_point(values: Sequence[int], denominator: int = 1) -> Tuple[Fraction, ...]:
    return tuple(Fraction(v, denominator) for v in values)


def _combine(parts: Sequence[Formula], space: SpaceDescriptor, degree: int, provenance: str) -> Formula:
    points: List[Tuple[Scalar, ...]] = []
    weights: List[Scalar] = []
    for part in parts:
        points.extend(part.points)
        weights.extend(part.weights)
    return Formula(space, tuple(points), tuple(weights), claimed_degree=degree, provenance=provenance)


def _symmetric_simplex(n: int, seeds: Sequence[Tuple[Sequence[int], int, Fraction]], degree: int, name: str) -> Formula:
    space = simplex(n - 1)
    return orbit_symmetrize(
        [_frac_point(values, denominator) for values, denominator, _ in seeds],
        [weight for _, _, weight in seeds],
        symmetric_generators(n),
        space=space,
        claimed_degree=degree,
        provenance=name,
    )


# ---------------------------------------------------------------------------
# simplex formulas


def _as_tetra_8() -> Formula:
    return _symmetric_simplex(
        4,
        [((1, 0, 0, 0), 1, Fraction(1, 40)), ((1, 1, 1, 0), 3, Fraction(9, 40))],
        3,
        "as-tetra-8",
    )


def _as_tetra_11() -> Formula:
    return _symmetric_simplex(
        4,
        [
            ((1, 0, 0, 0), 1, Fraction(1, 60)),
            ((1, 1, 0, 0), 2, Fraction(4, 60)),
            ((1, 1, 1, 1), 4, Fraction(32, 60)),
        ],
        3,
        "as-tetra-11",
    )


def _rains_delta3_8() -> Formula:
    def point(values: Sequence[Tuple[int, int]]) -> Tuple[Scalar, ...]:
        return tuple(quadratic(Fraction(a, 10), Fraction(b, 10), 5) for a, b in values)

    seeds = [
        point([(0, 0), (0, 0), (5, -1), (5, 1)]),
        point([(2, 0), (2, 0), (3, 1), (3, -1)]),
    ]
    generators = [
        SignedPermutation.from_cycles(4, [(2, 3)]),
        SignedPermutation.from_cycles(4, [(0, 2), (1, 3)]),
    ]
    return orbit_symmetrize(
        seeds,
        [Fraction(1, 24), Fraction(5, 24)],
        generators,
        space=simplex(3),
        claimed_degree=3,
        provenance="rains-delta3-8",
    )


def _stroud_delta5_16() -> Formula:
    return _symmetric_simplex(
        6,
        [((1, 1, 0, 0, 0, 0), 2, Fraction(1, 42)), ((1, 1, 1, 1, 1, 1), 6, Fraction(27, 42))],
        3,
        "stroud-delta5-16",
    )


def _steiner_part(t: int, k: int, v: int, weight: Fraction, space: SpaceDescriptor) -> Formula:
    points = steiner(t, k, v).indicator_points()
    return Formula(space, tuple(points), tuple(weight for _ in points))


def _bw_delta7_51() -> Formula:
    symmetric = _symmetric_simplex(
        8,
        [
            ((1, 0, 0, 0, 0, 0, 0, 0), 1, Fraction(1, 1080)),
            ((1, 1, 0, 0, 0, 0, 0, 0), 2, Fraction(1, 270)),
            ((1, 1, 1, 1, 1, 1, 1, 1), 8, Fraction(64, 135)),
        ],
        3,
        "bw-delta7-51",
    )
    blocks = _steiner_part(3, 4, 8, Fraction(4, 135), simplex(7))
    return _combine([symmetric, blocks], simplex(7), 3, "bw-delta7-51")


def solve_orbit_weights(
    orbits: Sequence[Sequence[Tuple[Fraction, ...]]],
    space: SpaceDescriptor,
    monomials: Sequence[ExponentVector],
) -> List[Fraction]:
    """Exact weights, one per orbit, reproducing the given moments."""

    unknowns = symbols(f"w0:{len(orbits)}")
    equations = []
    for alpha in monomials:
        lhs = 0
        for unknown, orbit in zip(unknowns, orbits):
            total = sum(
                (math.prod((c**e for c, e in zip(point, alpha)), start=Fraction(1)) for point in orbit),
                Fraction(0),
            )
            lhs += unknown * Rational(total.numerator, total.denominator)
        target = moment(space, alpha)
        equations.append(lhs - Rational(target.numerator, target.denominator))
    solutions = linsolve(equations, unknowns)
    if len(solutions) != 1:
        raise ArithmeticError("Orbit weight system has no solution.")
    (solution,) = solutions
    if any(value.free_symbols for value in solution):
        raise ArithmeticError("Orbit weight system is underdetermined.")
    return [Fraction(int(value.p), int(value.q)) for value in solution]


def _bw_delta7_23() -> Formula:
    space = simplex(7)
    vertices = [tuple(Fraction(int(i == j)) for j in range(8)) for i in range(8)]
    blocks = steiner(3, 4, 8).indicator_points()
    center = [tuple(Fraction(1, 8) for _ in range(8))]
    monomials = [
        (0,) * 8,
        (1,) + (0,) * 7,
        (2,) + (0,) * 7,
        (1, 1) + (0,) * 6,
        (3,) + (0,) * 7,
        (2, 1) + (0,) * 6,
        (1, 1, 1) + (0,) * 5,
    ]
    weights = solve_orbit_weights([vertices, blocks, center], space, monomials)
    points = vertices + blocks + center
    expanded = [weights[0]] * len(vertices) + [weights[1]] * len(blocks) + [weights[2]]
    return Formula(space, tuple(points), tuple(expanded), claimed_degree=3, provenance="bw-delta7-23")


def _rains_delta7_50() -> Formula:
    seeds = [
        ((1, 0, 0, 0, 0, 0, 0, 0), 1, Fraction(1, 720)),
        ((1, 1, 1, 1, 0, 0, 0, 0), 4, Fraction(1, 90)),
        ((1, 1, 0, 0, 1, 0, 0, 0), 3, Fraction(1, 80)),
        ((4, 0, 0, 0, 1, 1, 3, 3), 12, Fraction(1, 60)),
        ((4, 0, 4, 0, 1, 1, 1, 1), 12, Fraction(1, 40)),
        ((3, 1, 3, 1, 1, 1, 1, 1), 12, Fraction(1, 30)),
        ((3, 1, 1, 1, 1, 1, 3, 1), 12, Fraction(1, 30)),
    ]
    generators = [
        SignedPermutation.from_cycles(8, [(0, 1)]),
        SignedPermutation.from_cycles(8, [(0, 2), (1, 3), (4, 6), (5, 7)]),
        SignedPermutation.from_cycles(8, [(0, 4), (1, 5), (2, 6), (3, 7)]),
    ]
    return orbit_symmetrize(
        [_frac_point(values, d) for values, d, _ in seeds],
        [w for _, _, w in seeds],
        generators,
        space=simplex(7),
        claimed_degree=3,
        provenance="rains-delta7-50",
    )


def _leech_delta11_276() -> Formula:
    symmetric = _symmetric_simplex(
        12,
        [
            ((1, 1) + (0,) * 10, 2, Fraction(1, 10920)),
            ((7,) + (1,) * 11, 18, Fraction(27, 1820)),
            ((4, 4) + (1,) * 10, 18, Fraction(27, 3640)),
        ],
        5,
        "leech-delta11-276",
    )
    hexads = _steiner_part(5, 6, 12, Fraction(9, 3640), simplex(11))
    return _combine([symmetric, hexads], simplex(11), 5, "leech-delta11-276")


# ---------------------------------------------------------------------------
# triangle and exponential formulas


def _triangle_pb3() -> Formula:
    axis = quadratic(Fraction(16, 25), Fraction(-2, 25), 14)
    weight = quadratic(Fraction(161, 1344), Fraction(17, 1344), 14)
    generators = [
        SignedPermutation.from_cycles(2, [(0, 1)]),
        SignedPermutation.identity(2, conjugate=True),
    ]
    return orbit_symmetrize(
        [(Fraction(2, 5), Fraction(2, 5)), (axis, Fraction(0))],
        [Fraction(25, 48), weight],
        generators,
        space=corner_simplex(2),
        claimed_degree=3,
        provenance="triangle-pb3",
    )


def _exp2_parts(a: mpmath.mpf) -> Dict[str, mpmath.mpf]:
    """Orbit data of the exponential formula as a function of the diagonal node A.

    Mixed moments fix the diagonal weight u, the generic pair {b, c} and its
    weight w2; the pure moments left over must be matched by a two-node rule
    on each axis.
    """

    u = 1 / (a**2 * (a**2 - 4 * a + 5))
    q = (1 - u * a**2) / 2
    s = (2 - u * a**3) / q
    p = (4 - u * a**4) / (2 * q)
    w2 = q / p
    power_sums = [mp.mpf(2), s]
    for _ in range(3):
        power_sums.append(s * power_sums[-1] - p * power_sums[-2])
    leftover = [math.factorial(k) - u * a**k - w2 * power_sums[k] for k in range(5)]
    leftover[0] = leftover[0] / 2
    return {"u": u, "s": s, "p": p, "w2": w2, "m": leftover}


def _exp2_hankel(a: mpmath.mpf) -> mpmath.mpf:
    m = _exp2_parts(a)["m"]
    return mp.det(mp.matrix([[m[0], m[1], m[2]], [m[1], m[2], m[3]], [m[2], m[3], m[4]]]))


def _exp2_pb4(precision: int = DEFAULT_PRECISION_BITS) -> Formula:
    with mp.workprec(precision):
        try:
            a = mp.findroot(_exp2_hankel, (mp.mpf("1.3"), mp.mpf("1.5077")), solver="illinois")
        except ValueError as exc:
            raise ConvergenceError(f"Exponential formula solve did not converge: {exc}") from exc
        parts = _exp2_parts(a)
        m = parts["m"]
        disc = parts["s"] ** 2 - 4 * parts["p"]
        if disc < 0:
            raise ConvergenceError("Generic pair of the exponential formula is not real.")
        b = (parts["s"] + mp.sqrt(disc)) / 2
        c = (parts["s"] - mp.sqrt(disc)) / 2
        recurrence = mp.lu_solve(mp.matrix([[m[0], m[1]], [m[1], m[2]]]), mp.matrix([-m[2], -m[3]]))
        c0, c1 = recurrence[0], recurrence[1]
        root = c1**2 - 4 * c0
        if root < 0:
            raise ConvergenceError("Axis rule of the exponential formula has complex nodes.")
        x1 = (-c1 - mp.sqrt(root)) / 2
        x2 = (-c1 + mp.sqrt(root)) / 2
        v2 = (m[1] - m[0] * x1) / (x2 - x1)
        v1 = m[0] - v2
        values = [a, b, c, x1, x2, parts["u"], parts["w2"], v1, v2]
        if any(value <= 0 for value in values):
            raise ConvergenceError("Exponential formula solve produced a non-positive node or weight.")
        zero = mp.mpf(0)
        points = [(a, a), (b, c), (c, b), (x1, zero), (zero, x1), (x2, zero), (zero, x2)]
        weights = [parts["u"], parts["w2"], parts["w2"], v1, v1, v2, v2]
    return Formula(
        exponential_orthant(2),
        tuple(points),
        tuple(weights),
        claimed_degree=4,
        provenance="exp2-pb4",
        precision=precision,
    )


# ---------------------------------------------------------------------------
# Platonic solids


def _sign_orbit(seeds: Sequence[Tuple[Scalar, ...]], n: int, *, cyclic_only: bool, name: str, degree: int) -> Formula:
    generators = [SignedPermutation.from_cycles(n, [tuple(range(n))])]
    if not cyclic_only:
        generators.append(SignedPermutation.from_cycles(n, [(0, 1)]))
    generators += [
        SignedPermutation(tuple(range(n)), tuple(-1 if i == j else 1 for i in range(n))) for j in range(n)
    ]
    points = close_orbit([tuple(seed) for seed in seeds], [g.apply for g in generators])
    weight = Fraction(1, len(points))
    return Formula(sphere(n), tuple(points), tuple(weight for _ in points), degree, name)


def _octahedron() -> Formula:
    return _sign_orbit([_frac_point((1, 0, 0))], 3, cyclic_only=False, name="platonic-octa", degree=3)


def _cube() -> Formula:
    return _sign_orbit([_frac_point((1, 1, 1))], 3, cyclic_only=False, name="platonic-cube", degree=3)


def _icosahedron() -> Formula:
    golden = quadratic(Fraction(1, 2), Fraction(1, 2), 5)
    return _sign_orbit(
        [(Fraction(0), Fraction(1), golden)], 3, cyclic_only=True, name="platonic-icosa", degree=5
    )


CATALOG: Dict[str, CatalogEntry] = {
    entry.id: entry
    for entry in (
        CatalogEntry("as-tetra-8", "simplex(3)", 3, "E8 Eisenstein roots pushed to the tetrahedron", _as_tetra_8),
        CatalogEntry("as-tetra-11", "simplex(3)", 3, "E8 Gaussian roots pushed to the tetrahedron", _as_tetra_11),
        CatalogEntry("rains-delta3-8", "simplex(3)", 3, "E8 eigenplane projection over Q(sqrt 5)", _rains_delta3_8),
        CatalogEntry("stroud-delta5-16", "simplex(5)", 3, "K12 short vectors pushed to the 5-simplex", _stroud_delta5_16),
        CatalogEntry("bw-delta7-51", "simplex(7)", 3, "BW16 short vectors pushed to the 7-simplex", _bw_delta7_51),
        CatalogEntry("bw-delta7-23", "simplex(7)", 3, "BW16 projection without the edge-midpoint orbit", _bw_delta7_23),
        CatalogEntry("rains-delta7-50", "simplex(7)", 3, "BW16 Eisenstein-position projection", _rains_delta7_50),
        CatalogEntry("leech-delta11-276", "simplex(11)", 5, "complex Leech lattice projection", _leech_delta11_276),
        CatalogEntry("triangle-pb3", "corner_simplex(2)", 3, "PB 3-cubature on the triangle", _triangle_pb3),
        CatalogEntry("exp2-pb4", "exponential_orthant(2)", 4, "PB 4-cubature for exp(-x-y)", _exp2_pb4),
        CatalogEntry("platonic-octa", "sphere(3)", 3, "octahedron", _octahedron),
        CatalogEntry("platonic-cube", "sphere(3)", 3, "cube", _cube),
        CatalogEntry("platonic-icosa", "sphere(3)", 5, "icosahedron over Q(sqrt 5)", _icosahedron),
    )
}


@lru_cache(maxsize=None)
def _build(catalog_id: str) -> Formula:
    return CATALOG[catalog_id].build()


def named_formula(catalog_id: str, *, logger: Optional[logging.Logger] = None) -> Formula:
    log = logger or logging.getLogger(__name__)
    if catalog_id in UNAVAILABLE_IDS:
        raise UnavailableCatalogIdError(f"{catalog_id}: {UNAVAILABLE_IDS[catalog_id]}")
    if catalog_id not in CATALOG:
        raise UnknownCatalogIdError(f"Unknown catalog id {catalog_id!r}.")
    t0 = perf_counter()
    formula = _build(catalog_id)
    log.debug("Catalog entry %s finished in %.2f s (%d points).", catalog_id, perf_counter() - t0, len(formula))
    return formula


def catalog_ids() -> List[str]:
    return list(CATALOG)


def catalog_table(*, build: bool = True) -> pd.DataFrame:
    """One row per catalog id; unavailable ids are listed with no point count."""

    rows = []
    for entry in CATALOG.values():
        formula = named_formula(entry.id) if build else None
        rows.append(
            {
                "id": entry.id,
                "space": entry.space,
                "degree": entry.degree,
                "points": len(formula) if formula is not None else None,
                "scalar": formula.scalar if formula is not None else None,
                "available": True,
                "description": entry.description,
            }
        )
    for catalog_id, description in UNAVAILABLE_IDS.items():
        rows.append(
            {
                "id": catalog_id,
                "space": "simplex(11)",
                "degree": 5,
                "points": None,
                "scalar": None,
                "available": False,
                "description": description,
            }
        )
    return pd.DataFrame(rows)


__all__ = [
    "CATALOG",
    "CatalogEntry",
    "UNAVAILABLE_IDS",
    "catalog_ids",
    "catalog_table",
    "named_formula",
    "solve_orbit_weights",
    "symmetric_generators",
]
