"""Lattice designs on tori.

A finite subgroup F of the torus T = (R/Z)^n is dual to the sublattice of
characters vanishing on it, and F integrates every character of norm <= t
exactly when that sublattice has minimum distance t + 1. This module builds
such lattices (Craig, Noskov and hexagonal constructions), measures their
minimum distance by exhaustive enumeration and turns them into explicit
equal-weight point sets written in turns.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from time import perf_counter
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, isprime

from fibrature.lib.errors import FormulaFormatError, SearchCapError
from fibrature.lib.formula import Formula
from fibrature.lib.measures import TORUS_NORMS, trig_torus
from fibrature.lib.normal_form import diagonalize, invariant_factors
from fibrature.lib.verify import character_norm, enumerate_characters

IntRow = Tuple[int, ...]


@dataclass(frozen=True)
class IntegerLattice:
    """A full-rank character lattice.

    ``basis`` rows are ambient vectors: vectors of Z^m for the l1 norm, and
    zero-sum vectors of Z^m (so m - 1 rows) for the A_n root norm.
    """

    ambient: int
    basis: Tuple[IntRow, ...]
    norm: str = "l1"

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in row) for row in self.basis)
        object.__setattr__(self, "basis", rows)
        if self.norm not in TORUS_NORMS:
            raise ValueError(f"Lattice norm must be one of {TORUS_NORMS}, got {self.norm!r}.")
        expected = self.ambient if self.norm == "l1" else self.ambient - 1
        if len(rows) != expected or any(len(row) != self.ambient for row in rows):
            raise ValueError(
                f"A {self.norm} lattice in ambient dimension {self.ambient} needs {expected} rows "
                f"of length {self.ambient}."
            )
        if self.norm == "an_root" and any(sum(row) != 0 for row in rows):
            raise ValueError("A_n lattice vectors must have zero coordinate sum.")
        if self.index == 0:
            raise ValueError("Lattice basis is singular.")

    @classmethod
    def from_characters(cls, rows: Sequence[Sequence[int]], norm: str = "l1") -> "IntegerLattice":
        """Build from torus character coordinates (simple-root coordinates for A_n)."""

        rows = [tuple(int(x) for x in row) for row in rows]
        if norm == "l1":
            return cls(len(rows), tuple(rows), norm)
        return cls(len(rows) + 1, tuple(to_ambient(row) for row in rows), norm)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def character_basis(self) -> Tuple[IntRow, ...]:
        if self.norm == "l1":
            return self.basis
        return tuple(tuple(int(x) for x in np.cumsum(row)[:-1]) for row in self.basis)

    @cached_property
    def _adjugate(self) -> Tuple[Any, int]:
        matrix = Matrix(self.character_basis)
        return np.array(matrix.adjugate().tolist(), dtype=object), int(matrix.det())

    @property
    def index(self) -> int:
        """Index of the lattice in the full character lattice, |det|."""

        return abs(self._adjugate[1])

    def contains(self, k: Sequence[int]) -> bool:
        adjugate, det = self._adjugate
        coefficients = np.array(list(k), dtype=object) @ adjugate
        return all(int(c) % det == 0 for c in coefficients)

    def norm_of(self, k: Sequence[int]) -> int:
        return character_norm(k, self.norm)

    def transformed(self, unimodular: Sequence[Sequence[int]]) -> "IntegerLattice":
        """Same lattice written in another basis U @ B."""

        product = Matrix(unimodular) * Matrix(self.character_basis)
        if abs(Matrix(unimodular).det()) != 1:
            raise ValueError("Basis change must be unimodular.")
        return IntegerLattice.from_characters(product.tolist(), self.norm)

    def to_json(self) -> Dict[str, Any]:
        return {"ambient": self.ambient, "norm": self.norm, "basis": [list(row) for row in self.basis]}

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "IntegerLattice":
        try:
            return cls(int(payload["ambient"]), tuple(tuple(row) for row in payload["basis"]), payload.get("norm", "l1"))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormulaFormatError(f"Malformed lattice document: {exc}") from exc


def to_ambient(k: Sequence[int]) -> IntRow:
    """Zero-sum ambient vector of an A_n character given in simple-root coordinates."""

    return (k[0],) + tuple(k[i] - k[i - 1] for i in range(1, len(k))) + (-k[-1],)


@dataclass(frozen=True)
class TorusDesign:
    formula: Formula
    lattice: Optional[IntegerLattice]
    degree: int

    def __len__(self) -> int:
        return len(self.formula)


# ---------------------------------------------------------------------------
# Craig lattices


def _check_prime(p: int, minimum: int, what: str) -> None:
    if not isprime(p):
        raise ValueError(f"Modulus {p} is not prime.")
    if p < minimum:
        raise ValueError(f"Modulus {p} is too small for {what}; need p >= {minimum}.")


def kernel_mod_p(constraints: Sequence[Sequence[int]], p: int) -> List[IntRow]:
    """Basis of {c in Z^n : C c = 0 mod p}.

    The null-space vectors of the reduced row echelon form (lifted to
    integers) together with p times each pivot unit vector.
    """

    rows = [[x % p for x in row] for row in constraints]
    n = len(rows[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for col in range(n):
        pick = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pick is None:
            continue
        rows[r], rows[pick] = rows[pick], rows[r]
        inverse = pow(rows[r][col], -1, p)
        rows[r] = [(x * inverse) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [(x - factor * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    basis: List[IntRow] = []
    for free in (c for c in range(n) if c not in pivots):
        vector = [0] * n
        vector[free] = 1
        for row_index, pivot in enumerate(pivots):
            vector[pivot] = (-rows[row_index][free]) % p
        basis.append(tuple(vector))
    for pivot in pivots:
        vector = [0] * n
        vector[pivot] = p
        basis.append(tuple(vector))
    basis.sort(key=lambda v: [i for i, x in enumerate(v) if x][0])
    return basis


def craig_lattice_an(n: int, t: int, p: int, *, indices: Optional[Sequence[int]] = None) -> IntegerLattice:
    """Kernel of e_a -> (a, a^2, ..., a^t) mod p intersected with A_n."""

    if n < 1 or t < 1:
        raise ValueError(f"Need n >= 1 and t >= 1, got n={n}, t={t}.")
    _check_prime(p, max(n + 1, t + 1), f"A_{n} with t={t}")
    labels = list(range(n + 1)) if indices is None else [int(a) % p for a in indices]
    if len(labels) != n + 1 or len(set(labels)) != n + 1:
        raise ValueError(f"Need {n + 1} distinct indices mod {p}, got {labels}.")
    constraints = [
        [pow(labels[i], j, p) - pow(labels[i + 1], j, p) for i in range(n)] for j in range(1, t + 1)
    ]
    return IntegerLattice.from_characters(kernel_mod_p(constraints, p), "an_root")


def boost_even(lattice: IntegerLattice) -> IntegerLattice:
    """Even coordinate-sum sublattice (index 2 unless already even)."""

    rows = [list(row) for row in lattice.character_basis]
    odd = [i for i, row in enumerate(rows) if sum(row) % 2]
    if not odd:
        return lattice
    first = odd[0]
    for i in odd[1:]:
        rows[i] = [x - y for x, y in zip(rows[i], rows[first])]
    rows[first] = [2 * x for x in rows[first]]
    return IntegerLattice.from_characters(rows, lattice.norm)


def craig_lattice_zn(
    n: int,
    t: int,
    p: int,
    *,
    boost: bool = False,
    indices: Optional[Sequence[int]] = None,
) -> IntegerLattice:
    """Kernel of e_a -> (a, a^3, ..., a^(2t-1)) mod p in Z^n, l1 norm."""

    if n < 1 or t < 1:
        raise ValueError(f"Need n >= 1 and t >= 1, got n={n}, t={t}.")
    _check_prime(p, max(2 * n + 1, 2 * t + 1), f"Z^{n} with t={t}")
    labels = list(range(1, n + 1)) if indices is None else [int(a) % p for a in indices]
    residues = set(labels)
    if len(labels) != n or len(residues) != n or any((-a) % p in residues for a in labels) or 0 in residues:
        raise ValueError(f"Indices {labels} must be {n} nonzero residues disjoint from their negatives.")
    constraints = [[pow(a, 2 * j + 1, p) for a in labels] for j in range(t)]
    lattice = IntegerLattice.from_characters(kernel_mod_p(constraints, p), "l1")
    return boost_even(lattice) if boost else lattice


# ---------------------------------------------------------------------------
# Noskov and hexagonal lattices


def noskov_lattice(s: int, parity: str = "even") -> IntegerLattice:
    if s < 1:
        raise ValueError(f"Noskov designs need s >= 1, got {s}.")
    if parity == "even":
        return IntegerLattice.from_characters([(s, s), (s, -s)])
    if parity == "odd":
        return IntegerLattice.from_characters([(s, s + 1), (-(s + 1), s)])
    raise ValueError(f"Parity must be 'even' or 'odd', got {parity!r}.")


def hex_lattice(d: int) -> IntegerLattice:
    """Eisenstein ideal generated by floor(d/2) - omega*floor((d+1)/2).

    An Eisenstein integer a + b*omega is the A_2 character with simple-root
    coordinates (a, b); the ideal is spanned by beta and omega*beta.
    """

    if d < 1:
        raise ValueError(f"Hexagonal designs need d >= 1, got {d}.")
    a, b = d // 2, -((d + 1) // 2)
    return IntegerLattice.from_characters([(a, b), (-b, a - b)], "an_root")


def cyclic_lattice(coefficients: Sequence[int], modulus: int) -> IntegerLattice:
    """Kernel of k -> k . (1, c_2, ..., c_n) mod N in Z^n (l1 norm), index N."""

    if modulus < 1:
        raise ValueError(f"Modulus must be positive, got {modulus}.")
    n = len(coefficients) + 1
    rows: List[IntRow] = [tuple(modulus if i == 0 else 0 for i in range(n))]
    for j, c in enumerate(coefficients, start=1):
        rows.append(tuple(-(int(c) % modulus) if i == 0 else int(i == j) for i in range(n)))
    return IntegerLattice.from_characters(rows)


def search_cyclic_lattice(
    n: int,
    modulus: int,
    distance: int,
    *,
    logger: Optional[logging.Logger] = None,
) -> IntegerLattice:
    """First cyclic sublattice of Z^n of index N with l1 minimum distance >= ``distance``.

    Candidates (1, c_2, ..., c_n) mod N are scanned in lexicographic order.
    When N is squarefree every sublattice with this distance (>= 3) has a
    unit coefficient, so the scan is exhaustive.
    """

    log = logger or logging.getLogger(__name__)
    if n < 2:
        raise ValueError(f"Need n >= 2, got {n}.")
    t0 = perf_counter()
    short = np.array([k for k in enumerate_characters(n, distance - 1, half=True) if any(k)], dtype=np.int64)
    grid = np.array(list(np.ndindex(*([modulus] * (n - 1)))), dtype=np.int64)
    candidates = np.hstack([np.ones((grid.shape[0], 1), dtype=np.int64), grid])
    residues = np.mod(short @ candidates.T, modulus)
    good = np.flatnonzero(np.all(residues != 0, axis=0))
    if not good.size:
        raise SearchCapError(
            f"No cyclic sublattice of Z^{n} with index {modulus} reaches distance {distance}.", cap=distance
        )
    coefficients = [int(c) for c in grid[good[0]]]
    log.debug(
        "Cyclic lattice search finished in %.2f s (%d of %d candidates, first %s).",
        perf_counter() - t0,
        good.size,
        grid.shape[0],
        coefficients,
    )
    return cyclic_lattice(coefficients, modulus)


# ---------------------------------------------------------------------------
# distances and point sets


def min_distance(lattice: IntegerLattice, cap: int, *, logger: Optional[logging.Logger] = None) -> int:
    """Smallest norm of a nonzero lattice vector, searching norms up to ``cap``."""

    log = logger or logging.getLogger(__name__)
    t0 = perf_counter()
    candidates = [k for k in enumerate_characters(lattice.rank, cap, lattice.norm, half=True) if any(k)]
    if candidates:
        adjugate, det = lattice._adjugate
        coefficients = np.array(candidates, dtype=object) @ adjugate
        hits = np.all(np.mod(coefficients, det) == 0, axis=1)
        found = np.flatnonzero(hits)
        if found.size:
            k = candidates[int(found[0])]
            distance = lattice.norm_of(k)
            log.debug(
                "Minimum distance search finished in %.2f s (%d candidates, distance %d via %s).",
                perf_counter() - t0,
                len(candidates),
                distance,
                k,
            )
            return distance
    raise SearchCapError(f"No nonzero lattice vector of norm <= {cap}.", cap=cap)


def design_degree_structural(lattice: IntegerLattice, t_max: int) -> int:
    """Trigonometric degree of the dual subgroup: min_distance - 1."""

    return min_distance(lattice, t_max + 1) - 1


def subgroup_points(
    lattice: IntegerLattice,
    *,
    degree: Optional[int] = None,
    provenance: str = "",
) -> TorusDesign:
    """The finite subgroup of the torus on which every lattice character is trivial.

    With P K Q = D diagonal, the points are Q (z / d) mod 1 for z in the box
    of the diagonal entries d.
    """

    _, diagonal, q = diagonalize(lattice.character_basis)
    n = lattice.rank
    orders = [diagonal[i][i] for i in range(n)]
    q_matrix = [[Fraction(x) for x in row] for row in q]
    points = []
    for z in np.ndindex(*orders):
        scaled = [Fraction(int(z[i]), orders[i]) for i in range(n)]
        theta = tuple(sum((q_matrix[r][c] * scaled[c] for c in range(n)), Fraction(0)) % 1 for r in range(n))
        points.append(theta)
    points.sort()
    weight = Fraction(1, len(points))
    formula = Formula(
        trig_torus(n, lattice.norm),
        tuple(points),
        tuple(weight for _ in points),
        claimed_degree=degree,
        provenance=provenance or f"dual of {lattice.norm} lattice of index {lattice.index}",
    )
    if len(points) != lattice.index:
        raise ArithmeticError(f"Subgroup has {len(points)} points but the lattice index is {lattice.index}.")
    return TorusDesign(formula, lattice, -1 if degree is None else degree)


def lattice_design(lattice: IntegerLattice, *, cap: int = 16, provenance: str = "") -> TorusDesign:
    degree = design_degree_structural(lattice, cap)
    return subgroup_points(lattice, degree=degree, provenance=provenance)


def noskov_design(s: int, parity: str = "even") -> TorusDesign:
    degree = 2 * s - 1 if parity == "even" else 2 * s
    return subgroup_points(noskov_lattice(s, parity), degree=degree, provenance=f"noskov s={s} {parity}")


def hex_design(d: int) -> TorusDesign:
    return subgroup_points(hex_lattice(d), degree=d - 1, provenance=f"hexagonal d={d}")


def circle_design(degree: int) -> TorusDesign:
    """Equally spaced points on the circle, integrating characters up to ``degree``."""

    if degree < 0:
        raise ValueError(f"Degree must be >= 0, got {degree}.")
    count = 2 * math.ceil((degree + 1) / 2)
    points = tuple((Fraction(j, count),) for j in range(count))
    formula = Formula(
        trig_torus(1),
        points,
        tuple(Fraction(1, count) for _ in points),
        claimed_degree=count - 1,
        provenance=f"circle {count} points",
    )
    return TorusDesign(formula, IntegerLattice.from_characters([(count,)]), count - 1)


def lattice_invariant_factors(lattice: IntegerLattice) -> List[int]:
    """Cyclic decomposition of the dual subgroup (factors equal to 1 dropped)."""

    return [d for d in invariant_factors(lattice.character_basis) if d != 1]


def hight_bound(n: int, d: int, density: Fraction | int, volume: Fraction | int) -> Fraction:
    """Lower bound d^n vol(K) / (2^n density) on additive (d-1)-designs."""

    density = Fraction(density)
    volume = Fraction(volume)
    if not 0 < density <= 1:
        raise ValueError(f"Packing density must lie in (0, 1], got {density}.")
    if volume <= 0:
        raise ValueError(f"Volume must be positive, got {volume}.")
    return Fraction(d) ** n * volume / (2**n * density)


__all__ = [
    "IntegerLattice",
    "TorusDesign",
    "boost_even",
    "circle_design",
    "craig_lattice_an",
    "craig_lattice_zn",
    "cyclic_lattice",
    "design_degree_structural",
    "hex_design",
    "hex_lattice",
    "hight_bound",
    "kernel_mod_p",
    "lattice_design",
    "lattice_invariant_factors",
    "min_distance",
    "noskov_design",
    "noskov_lattice",
    "search_cyclic_lattice",
    "subgroup_points",
    "to_ambient",
]
