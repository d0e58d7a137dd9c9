"""Steiner systems and Hadamard matrices, and the simplex formulas built from them."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from sympy import isprime, legendre_symbol

from fibrature.lib.errors import HadamardUnavailableError
from fibrature.lib.formula import Formula, close_orbit
from fibrature.lib.measures import simplex

SUPPORTED_STEINER = ((3, 4, 8), (5, 6, 12))
INFINITY = 11


@dataclass(frozen=True)
class SteinerSystem:
    t: int
    k: int
    v: int
    blocks: Tuple[FrozenSet[int], ...]

    def is_valid(self) -> bool:
        """Every t-subset lies in exactly one block."""

        if any(len(block) != self.k for block in self.blocks):
            return False
        counts = Counter(
            subset for block in self.blocks for subset in itertools.combinations(sorted(block), self.t)
        )
        return len(counts) == math.comb(self.v, self.t) and set(counts.values()) == {1}

    def indicator_points(self) -> List[Tuple[Fraction, ...]]:
        """Barycenters of the blocks as points of the (v-1)-simplex."""

        share = Fraction(1, self.k)
        return [tuple(share if i in block else Fraction(0) for i in range(self.v)) for block in self.blocks]


def _affine_planes() -> Tuple[FrozenSet[int], ...]:
    planes = {frozenset(quad) for quad in itertools.combinations(range(8), 4) if quad[0] ^ quad[1] ^ quad[2] ^ quad[3] == 0}
    return tuple(sorted(planes, key=sorted))


def _mobius_shift(x: int) -> int:
    return INFINITY if x == INFINITY else (x + 1) % 11


def _mobius_invert(x: int) -> int:
    # x -> -1/x on the projective line over F_11
    if x == INFINITY:
        return 0
    if x == 0:
        return INFINITY
    return (-pow(x, -1, 11)) % 11


def _psl_orbit(base: FrozenSet[int]) -> Tuple[FrozenSet[int], ...]:
    operations = [
        lambda block: frozenset(_mobius_shift(x) for x in block),
        lambda block: frozenset(_mobius_invert(x) for x in block),
    ]
    orbit = close_orbit([base], operations, cap=10_000)
    return tuple(sorted(orbit, key=sorted))


def steiner(t: int, k: int, v: int) -> SteinerSystem:
    """S(3,4,8) from the affine planes of F_2^3; S(5,6,12) from PSL(2,11) on PG(1,11).

    The projective line is labelled 0..10 with infinity as 11.
    """

    if (t, k, v) == (3, 4, 8):
        system = SteinerSystem(3, 4, 8, _affine_planes())
    elif (t, k, v) == (5, 6, 12):
        squares = {pow(x, 2, 11) for x in range(1, 11)}
        system = SteinerSystem(5, 6, 12, _psl_orbit(frozenset(squares | {INFINITY})))
        if not system.is_valid():
            system = SteinerSystem(5, 6, 12, _psl_orbit(frozenset(squares | {0})))
    else:
        raise ValueError(f"Unsupported Steiner parameters {(t, k, v)}; supported: {SUPPORTED_STEINER}.")
    if not system.is_valid():
        raise ArithmeticError(f"Construction of S{(t, k, v)} failed its covering check.")
    return system


# ---------------------------------------------------------------------------
# Hadamard matrices


def _sylvester(n: int) -> npt.NDArray[np.int64]:
    matrix = np.ones((1, 1), dtype=np.int64)
    while matrix.shape[0] < n:
        matrix = np.block([[matrix, matrix], [matrix, -matrix]])
    return matrix


def _paley(q: int) -> npt.NDArray[np.int64]:
    """Paley I: H = I + S with S the skew core built from the Jacobsthal matrix."""

    jacobsthal = np.array(
        [[0 if i == j else legendre_symbol((j - i) % q, q) for j in range(q)] for i in range(q)],
        dtype=np.int64,
    )
    n = q + 1
    skew = np.zeros((n, n), dtype=np.int64)
    skew[0, 1:] = 1
    skew[1:, 0] = -1
    skew[1:, 1:] = jacobsthal
    return np.eye(n, dtype=np.int64) + skew


def hadamard_matrix(n: int) -> npt.NDArray[np.int64]:
    """A Hadamard matrix of order n (Sylvester for powers of two, else Paley I)."""

    if n >= 1 and n & (n - 1) == 0:
        matrix = _sylvester(n)
    elif n > 2 and n % 4 == 0 and isprime(n - 1) and (n - 1) % 4 == 3:
        matrix = _paley(n - 1)
    else:
        raise HadamardUnavailableError(f"No Sylvester or Paley I Hadamard matrix of order {n}.")
    if not np.array_equal(matrix @ matrix.T, n * np.eye(n, dtype=np.int64)):
        raise ArithmeticError(f"Hadamard construction of order {n} is not orthogonal.")
    return matrix


def normalize_hadamard(matrix: npt.NDArray[np.int64]) -> npt.NDArray[np.int64]:
    """Flip column signs so that the first row is all ones."""

    return matrix * matrix[0][None, :]


def hadamard_simplex_formula(n: int, *, matrix: Optional[npt.NDArray[np.int64]] = None) -> Formula:
    """PB 3-cubature on the (n-1)-simplex from a Hadamard matrix of order n.

    Corners, the two half-support barycenters cut out by each non-constant
    row, and the center.
    """

    if n < 2:
        raise ValueError(f"Hadamard simplex formulas need n >= 2, got {n}.")
    h = normalize_hadamard(hadamard_matrix(n) if matrix is None else matrix)
    half = Fraction(2, n)
    points: List[Tuple[Fraction, ...]] = []
    weights: List[Fraction] = []
    corner = Fraction(2, n * (n + 1) * (n + 2))
    for i in range(n):
        points.append(tuple(Fraction(int(i == j)) for j in range(n)))
        weights.append(corner)
    face = Fraction(n, 2 * (n + 1) * (n + 2))
    for row in h[1:]:
        for sign in (1, -1):
            points.append(tuple(half if int(x) == sign else Fraction(0) for x in row))
            weights.append(face)
    points.append(tuple(Fraction(1, n) for _ in range(n)))
    weights.append(Fraction(4 * n, (n + 1) * (n + 2)))
    return Formula(simplex(n - 1), tuple(points), tuple(weights), claimed_degree=3, provenance=f"hadamard n={n}")


__all__ = [
    "SUPPORTED_STEINER",
    "SteinerSystem",
    "hadamard_matrix",
    "hadamard_simplex_formula",
    "normalize_hadamard",
    "steiner",
]
