"""Short vectors of E8, K12 and BW16, and mutually unbiased bases.

Complex vectors are stored through their real coordinates, (re, im) per
complex coordinate. Orbits are closed over exact integer data first:
Eisenstein integers a + b*omega and Gaussian integers a + b*i are pairs
(a, b), and the embedding into real coordinates happens at the end.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from time import perf_counter
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from mpmath import mp
from sympy import isprime

from fibrature.lib.config import DEFAULT_CLOSURE_CAP, DEFAULT_PRECISION_BITS
from fibrature.lib.errors import FormulaFormatError
from fibrature.lib.exact import Scalar, format_scalar, parse_scalar, quadratic, scalar_tag, to_mpf
from fibrature.lib.formula import Formula, close_orbit
from fibrature.lib.measures import sphere

RINGS = ("eisenstein", "gaussian", "real", "cyclotomic")
E8_POSITIONS = ("eisenstein", "gaussian", "real")

Pair = Tuple[int, int]


@dataclass(frozen=True)
class ComplexVectorSet:
    """Vectors in C^dim, each given as 2*dim real coordinates."""

    ring: str
    dim: int
    vectors: Tuple[Tuple[Scalar, ...], ...]
    weights: Optional[Tuple[Scalar, ...]] = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.ring not in RINGS:
            raise ValueError(f"Unknown ring {self.ring!r}.")
        for index, v in enumerate(self.vectors):
            if len(v) != 2 * self.dim:
                raise ValueError(f"Vector {index} has {len(v)} real coordinates, expected {2 * self.dim}.")
        if self.weights is not None and len(self.weights) != len(self.vectors):
            raise ValueError("Weights and vectors differ in length.")

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def is_exact(self) -> bool:
        return scalar_tag(c for v in self.vectors for c in v) != "float"

    def squared_norms(self) -> List[Scalar]:
        return [sum(c * c for c in v) for v in self.vectors]

    def common_norm(self) -> Scalar:
        norms = self.squared_norms()
        first = norms[0]
        if self.is_exact:
            if any(n != first for n in norms):
                raise ValueError(f"{self.label or 'Vector set'} has vectors of different norms.")
        elif any(abs(to_mpf(n) - to_mpf(first)) > mp.mpf(2) ** (-(mp.prec - 16)) for n in norms):
            raise ValueError(f"{self.label or 'Vector set'} has vectors of different norms.")
        return first

    def equal_weights(self) -> Tuple[Scalar, ...]:
        if self.weights is not None:
            return self.weights
        return tuple(Fraction(1, len(self.vectors)) for _ in self.vectors)

    def sphere_formula(self, *, unit: bool = False, precision: int = DEFAULT_PRECISION_BITS) -> Formula:
        """The vectors as a formula on S^(2 dim - 1).

        Without ``unit`` the points keep their common radius; verification
        rescales the moments. ``unit`` converts to bigfloats on the unit sphere.
        """

        radius_squared = self.common_norm()
        points: Sequence[Sequence[Any]] = self.vectors
        weights: Sequence[Any] = self.equal_weights()
        if unit:
            with mp.workprec(precision):
                scale = 1 / mp.sqrt(to_mpf(radius_squared))
                points = [[to_mpf(c) * scale for c in v] for v in self.vectors]
                weights = [to_mpf(w) for w in weights]
        return Formula(
            sphere(2 * self.dim),
            tuple(tuple(p) for p in points),
            tuple(weights),
            provenance=self.label,
            precision=precision if unit else None,
        )

    def to_json(self) -> Dict[str, Any]:
        values = [c for v in self.vectors for c in v]
        tag = scalar_tag(values)
        payload: Dict[str, Any] = {
            "ring": self.ring,
            "dim": self.dim,
            "scalar": tag,
            "label": self.label,
            "vectors": [[format_scalar(c) for c in v] for v in self.vectors],
        }
        if self.weights is not None:
            payload["weights"] = [format_scalar(w) for w in self.weights]
        return payload

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "ComplexVectorSet":
        try:
            tag = payload.get("scalar", "rational")
            vectors = tuple(tuple(parse_scalar(c, tag=tag) for c in v) for v in payload["vectors"])
            raw_weights = payload.get("weights")
            weights = tuple(parse_scalar(w, tag=tag) for w in raw_weights) if raw_weights else None
            return cls(payload["ring"], int(payload["dim"]), vectors, weights, str(payload.get("label", "")))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormulaFormatError(f"Malformed line set document: {exc}") from exc


# ---------------------------------------------------------------------------
# integer arithmetic in Z[omega] and Z[i]


def omega_times(z: Pair) -> Pair:
    """omega (a + b omega) = -b + (a - b) omega."""

    return (-z[1], z[0] - z[1])


def i_times(z: Pair) -> Pair:
    return (-z[1], z[0])


def negate(z: Pair) -> Pair:
    return (-z[0], -z[1])


def embed_eisenstein(vector: Sequence[Pair]) -> Tuple[Scalar, ...]:
    """a + b omega -> (a - b/2, b sqrt(3)/2)."""

    coordinates: List[Scalar] = []
    for a, b in vector:
        coordinates.append(Fraction(2 * a - b, 2))
        coordinates.append(quadratic(0, Fraction(b, 2), 3))
    return tuple(coordinates)


def embed_gaussian(vector: Sequence[Pair]) -> Tuple[Scalar, ...]:
    return tuple(Fraction(x) for z in vector for x in z)


def _replace(vector: Tuple[Any, ...], index: int, value: Any) -> Tuple[Any, ...]:
    return vector[:index] + (value,) + vector[index + 1 :]


def _permute(vector: Tuple[Any, ...], target: Sequence[int]) -> Tuple[Any, ...]:
    image: List[Any] = [None] * len(vector)
    for source, value in enumerate(vector):
        image[target[source]] = value
    return tuple(image)


def _close(
    seeds: Sequence[Tuple[Any, ...]],
    operations: Sequence[Callable[[Any], Any]],
    label: str,
    cap: int,
    log: logging.Logger,
) -> List[Tuple[Any, ...]]:
    t0 = perf_counter()
    orbit = close_orbit(seeds, operations, cap=cap)
    log.debug("Closure of %s finished in %.2f s (%d vectors).", label, perf_counter() - t0, len(orbit))
    return orbit


# ---------------------------------------------------------------------------
# E8


def _e8_eisenstein(cap: int, log: logging.Logger) -> ComplexVectorSet:
    one, zero = (1, 0), (0, 0)
    seeds = [(one, one, one, zero), ((1, -1), zero, zero, zero)]
    operations: List[Callable[[Any], Any]] = [
        lambda v: (v[3], v[0], negate(v[1]), v[2]),
        lambda v: (v[1], v[0], v[2], negate(v[3])),
        lambda v: (v[2], v[0], v[1], v[3]),
    ]
    operations += [lambda v, j=j: _replace(v, j, omega_times(v[j])) for j in range(4)]
    orbit = _close(seeds, operations, "E8 (Eisenstein)", cap, log)
    return ComplexVectorSet("eisenstein", 4, tuple(embed_eisenstein(v) for v in orbit), label="e8-eisenstein")


def _e8_gaussian(cap: int, log: logging.Logger) -> ComplexVectorSet:
    one, zero = (1, 0), (0, 0)
    seeds = [(one, one, one, one), ((2, 0), zero, zero, zero), ((1, 1), (1, 1), zero, zero)]
    operations: List[Callable[[Any], Any]] = [
        lambda v: _permute(v, (1, 0, 2, 3)),
        lambda v: _permute(v, (1, 2, 3, 0)),
    ]
    for j, k in itertools.combinations(range(4), 2):
        operations.append(lambda v, j=j, k=k: _replace(_replace(v, j, i_times(v[j])), k, i_times(v[k])))
    orbit = _close(seeds, operations, "E8 (Gaussian)", cap, log)
    return ComplexVectorSet("gaussian", 4, tuple(embed_gaussian(v) for v in orbit), label="e8-gaussian")


def _e8_real() -> ComplexVectorSet:
    """The 240 roots of E8 in doubled coordinates, so that every entry is an integer."""

    vectors = []
    for i, j in itertools.combinations(range(8), 2):
        for si, sj in itertools.product((2, -2), repeat=2):
            v = [0] * 8
            v[i], v[j] = si, sj
            vectors.append(tuple(Fraction(x) for x in v))
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            vectors.append(tuple(Fraction(s) for s in signs))
    return ComplexVectorSet("real", 4, tuple(vectors), label="e8-real")


def e8_roots(
    position: str = "eisenstein",
    *,
    cap: int = DEFAULT_CLOSURE_CAP,
    logger: Optional[logging.Logger] = None,
) -> ComplexVectorSet:
    log = logger or logging.getLogger(__name__)
    if position == "eisenstein":
        return _e8_eisenstein(cap, log)
    if position == "gaussian":
        return _e8_gaussian(cap, log)
    if position == "real":
        return _e8_real()
    raise ValueError(f"Unknown E8 position {position!r}; choose from {E8_POSITIONS}.")


# ---------------------------------------------------------------------------
# K12 and BW16


def k12_short_vectors(*, cap: int = DEFAULT_CLOSURE_CAP, logger: Optional[logging.Logger] = None) -> ComplexVectorSet:
    """The 756 minimal vectors of the Coxeter-Todd lattice as an Eisenstein lattice in C^6."""

    log = logger or logging.getLogger(__name__)
    one, zero = (1, 0), (0, 0)
    seeds = [(one,) * 6, ((1, -1), (-1, 1), zero, zero, zero, zero)]
    operations: List[Callable[[Any], Any]] = [
        lambda v: _permute(v, (1, 0, 2, 3, 4, 5)),
        lambda v: _permute(v, (1, 2, 3, 4, 5, 0)),
        lambda v: _replace(_replace(v, 0, omega_times(v[0])), 1, omega_times(omega_times(v[1]))),
        lambda v: tuple(negate(z) for z in v),
    ]
    orbit = _close(seeds, operations, "K12", cap, log)
    return ComplexVectorSet("eisenstein", 6, tuple(embed_eisenstein(v) for v in orbit), label="k12")


def _affine_label_maps() -> List[Tuple[int, ...]]:
    """Generators of AGL(4,2) acting on the 16 labels of F_2^4."""

    maps = [tuple(x ^ (1 << b) for x in range(16)) for b in range(4)]
    for b, c in itertools.permutations(range(4), 2):
        maps.append(tuple(x ^ (((x >> b) & 1) << c) for x in range(16)))
    return maps


def bw16_short_vectors(*, cap: int = DEFAULT_CLOSURE_CAP, logger: Optional[logging.Logger] = None) -> ComplexVectorSet:
    """The 4320 minimal vectors of the Barnes-Wall lattice in R^16."""

    log = logger or logging.getLogger(__name__)
    seeds = [(1,) * 8 + (0,) * 8, (2, 2) + (0,) * 14]

    def flip(v: Tuple[int, ...], i: int, j: int) -> Optional[Tuple[int, ...]]:
        image = list(v)
        image[i], image[j] = -image[i], -image[j]
        return tuple(image) if sum(image) % 4 == 0 else None

    operations: List[Callable[[Any], Any]] = [lambda v, m=m: _permute(v, m) for m in _affine_label_maps()]
    operations += [lambda v, i=i, j=j: flip(v, i, j) for i, j in itertools.combinations(range(16), 2)]
    orbit = _close(seeds, operations, "BW16", cap, log)
    return ComplexVectorSet("real", 8, tuple(tuple(Fraction(x) for x in v) for v in orbit), label="bw16")


# ---------------------------------------------------------------------------
# mutually unbiased bases


def _root_of_unity(q: int, m: int, exact: bool) -> Tuple[Scalar, Scalar]:
    m %= q
    if exact:
        # q == 3
        if m == 0:
            return Fraction(1), Fraction(0)
        return Fraction(-1, 2), quadratic(0, Fraction(1 if m == 1 else -1, 2), 3)
    angle = 2 * mp.pi * m / q
    return mp.cos(angle), mp.sin(angle)


def mub_design(q: int, *, precision: int = DEFAULT_PRECISION_BITS) -> ComplexVectorSet:
    """q^2 + q lines in C^q: sqrt(q) e_k and the quadratic-phase vectors.

    Entries are exact in Q(sqrt 3) for q = 3 and bigfloats otherwise.
    """

    if q < 3 or q % 2 == 0 or not isprime(q):
        raise ValueError(f"MUB designs need an odd prime, got {q}.")
    exact = q == 3
    vectors: List[Tuple[Scalar, ...]] = []
    with mp.workprec(precision):
        root = quadratic(0, 1, 3) if exact else mp.sqrt(q)
        zero: Scalar = Fraction(0) if exact else mp.mpf(0)
        for k in range(q):
            v = [zero] * (2 * q)
            v[2 * k] = root
            vectors.append(tuple(v))
        for a, b in itertools.product(range(q), repeat=2):
            v = []
            for k in range(q):
                v.extend(_root_of_unity(q, a * k * k + b * k, exact))
            vectors.append(tuple(v))
    ring = "eisenstein" if exact else "cyclotomic"
    return ComplexVectorSet(ring, q, tuple(vectors), label=f"mub-{q}")


LINE_SETS: Dict[str, Callable[[], ComplexVectorSet]] = {
    "e8-eisenstein": lambda: e8_roots("eisenstein"),
    "e8-gaussian": lambda: e8_roots("gaussian"),
    "e8-real": lambda: e8_roots("real"),
    "k12": k12_short_vectors,
    "bw16": bw16_short_vectors,
}


def named_vector_set(name: str) -> ComplexVectorSet:
    """Look up ``e8-<position>``, ``k12``, ``bw16`` or ``mub:<q>``."""

    if name.startswith("mub:"):
        return mub_design(int(name.split(":", 1)[1]))
    if name not in LINE_SETS:
        raise KeyError(f"Unknown vector set {name!r}.")
    return LINE_SETS[name]()


__all__ = [
    "ComplexVectorSet",
    "E8_POSITIONS",
    "LINE_SETS",
    "bw16_short_vectors",
    "e8_roots",
    "embed_eisenstein",
    "embed_gaussian",
    "i_times",
    "k12_short_vectors",
    "mub_design",
    "named_vector_set",
    "negate",
    "omega_times",
]
