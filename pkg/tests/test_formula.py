from fractions import Fraction

import mpmath
import pytest

from fibrature.lib.catalog import symmetric_generators
from fibrature.lib.errors import FormulaFormatError, OrbitCapError
from fibrature.lib.exact import QuadraticScalar
from fibrature.lib.formula import (
    Formula,
    SignedPermutation,
    classify,
    close_orbit,
    merge_duplicates,
    orbit_symmetrize,
)
from fibrature.lib.measures import simplex, sphere, uniform_interval

F = Fraction


def vertices(n):
    points = [tuple(F(int(i == j)) for j in range(n + 1)) for i in range(n + 1)]
    return Formula(simplex(n), points, [F(1, n + 1)] * (n + 1), 1, "vertices")


def test_shape_checks():
    with pytest.raises(ValueError):
        Formula(simplex(2), [(F(1), F(0), F(0))], [F(1, 2), F(1, 2)])
    with pytest.raises(ValueError):
        Formula(simplex(2), [(F(1), F(0))], [F(1)])


def test_scalar_tag_follows_contents():
    assert vertices(2).scalar == "rational"
    root = QuadraticScalar(0, F(1, 3), 3)
    quadratic = Formula(uniform_interval(), [(root,), (-root,)], [F(1, 2), F(1, 2)])
    assert quadratic.scalar == "quadratic:3"
    assert quadratic.is_exact
    floating = Formula(uniform_interval(), [(mpmath.mpf(0),)], [mpmath.mpf(1)])
    assert floating.scalar == "float"
    assert not floating.is_exact
    assert floating.precision is not None


def test_json_keeps_exact_values():
    root = QuadraticScalar(0, F(1, 3), 3)
    f = Formula(uniform_interval(), [(root,), (-root,)], [F(1, 2), F(1, 2)], 3, "gauss-2")
    payload = f.to_json()
    assert payload["scalar"] == "quadratic:3"
    assert payload["points"][0] == ["0/1+1/3*sqrt(3)"]
    assert Formula.from_json(payload) == f


def test_malformed_json():
    with pytest.raises(FormulaFormatError):
        Formula.from_json([1, 2, 3])
    with pytest.raises(FormulaFormatError):
        Formula.from_json({"space": {"kind": "simplex", "dim": 1}, "points": [["1/2", "x"]], "weights": ["1"]})
    with pytest.raises(FormulaFormatError):
        Formula.from_json({"space": {"kind": "simplex", "dim": 1}, "weights": []})


def test_weight_sum_and_claim():
    f = vertices(3)
    assert f.weight_sum() == 1
    g = f.with_claim(2, "relabelled")
    assert g.claimed_degree == 2 and g.provenance == "relabelled"
    assert f.claimed_degree == 1


def test_merge_duplicates_sums_and_drops():
    point = (F(1, 2), F(1, 2))
    f = Formula(simplex(1), [point, point, (F(1), F(0))], [F(1, 4), F(3, 4), F(0)])
    merged = merge_duplicates(f)
    assert merged.points == (point,)
    assert merged.weights == (F(1),)


def test_signed_permutation_cycles_and_signs():
    g = SignedPermutation.from_cycles(3, [(0, 1, 2)])
    assert g.perm == (1, 2, 0)
    assert g.apply((F(1), F(2), F(3))) == (F(3), F(1), F(2))
    flip = SignedPermutation((0, 1), (1, -1))
    assert flip.apply((F(1), F(2))) == (F(1), F(-2))
    with pytest.raises(ValueError):
        SignedPermutation((0, 0))
    with pytest.raises(ValueError):
        SignedPermutation((0, 1), (1, 2))


def test_conjugating_permutation():
    g = SignedPermutation.identity(1, conjugate=True)
    x = QuadraticScalar(1, 1, 5)
    assert g.apply((x,)) == (x.conjugate(),)
    assert g.apply_weight(x) == x.conjugate()


def test_close_orbit_and_cap():
    shift = lambda k: (k + 1) % 12  # noqa: E731
    assert close_orbit([0], [shift]) == list(range(12))
    with pytest.raises(OrbitCapError):
        close_orbit([0], [shift], cap=5)


def test_orbit_symmetrize_vertices_and_center():
    f = orbit_symmetrize(
        [(F(1), F(0), F(0)), (F(1, 3), F(1, 3), F(1, 3))],
        [F(1, 12), F(3, 4)],
        symmetric_generators(3),
        space=simplex(2),
        claimed_degree=1,
    )
    assert len(f) == 4
    assert f.weight_sum() == 1


def test_overlapping_orbits_are_rejected():
    with pytest.raises(ValueError):
        orbit_symmetrize(
            [(F(1), F(0), F(0)), (F(0), F(1), F(0))],
            [F(1, 6), F(1, 6)],
            symmetric_generators(3),
            space=simplex(2),
        )


def test_classify_codes():
    assert classify(vertices(2)).code == "EB"
    center = Formula(simplex(2), [(F(1, 3),) * 3], [F(1)])
    assert classify(center).code == "EI"
    mixed = Formula(simplex(1), [(F(1, 2), F(1, 2)), (F(1), F(0))], [F(2, 3), F(1, 3)])
    assert classify(mixed).code == "PB"
    negative = Formula(simplex(1), [(F(1, 2), F(1, 2)), (F(1), F(0))], [F(2), F(-1)])
    assert classify(negative).code == "negative"
    outside = Formula(simplex(1), [(F(2), F(-1))], [F(1)])
    assert classify(outside).code == "exterior"


def test_classify_sphere_radius():
    octahedron = Formula(
        sphere(2),
        [(F(1), F(0)), (F(-1), F(0)), (F(0), F(1)), (F(0), F(-1))],
        [F(1, 4)] * 4,
    )
    flags = classify(octahedron)
    assert flags.interior and not flags.exterior
    uneven = Formula(sphere(2), [(F(1), F(0)), (F(2), F(0))], [F(1, 2)] * 2)
    assert classify(uneven).exterior
