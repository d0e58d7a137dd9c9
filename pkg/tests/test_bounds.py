from fractions import Fraction

import mpmath
import numpy as np
import pytest

from fibrature.lib.bounds import (
    bound_reports,
    christoffel_scaling,
    covering_radius,
    cpn_bound,
    epsnet_check,
    moller_sphere_bound,
    psu_torus_bound,
    sharp_check,
    simplex_distance,
    simplex_samples,
    space_bound_reports,
    stroud_bound,
    stroud_mysovskikh_check,
    torus_moller_bound,
)
from fibrature.lib.catalog import CATALOG, named_formula
from fibrature.lib.designs import hadamard_simplex_formula
from fibrature.lib.errors import PreconditionError, SearchCapError
from fibrature.lib.formula import Formula, classify
from fibrature.lib.measures import complex_projective, jacobi_interval, simplex, sphere, trig_torus
from fibrature.lib.orthopoly import gauss_quadrature, legendre_measure, lobatto_radau_quadrature


def test_closed_forms():
    assert cpn_bound(1, 1) == 6
    assert cpn_bound(3, 1) == 40
    assert moller_sphere_bound(3, 3) == 6
    assert moller_sphere_bound(8, 7) == 240
    assert stroud_bound(simplex(2), 2) == 3
    assert stroud_bound(sphere(3), 4) == 9
    assert stroud_bound(jacobi_interval(0, 0), 6) == 4
    assert stroud_bound(trig_torus(2), 2) == 5


def test_degree_parity_is_checked():
    with pytest.raises(ValueError):
        stroud_bound(simplex(2), 3)
    with pytest.raises(ValueError):
        moller_sphere_bound(3, 4)
    with pytest.raises(ValueError):
        cpn_bound(-1, 1)


def test_torus_bounds():
    # the octahedral torus design has 38 points and degree 5
    assert torus_moller_bound(3, 2) == 38
    assert torus_moller_bound(2, 1) == 8
    report = stroud_mysovskikh_check(2, 1, 5)
    assert report.value == 5 and report.satisfied and report.slack == 1
    odd = stroud_mysovskikh_check(3, 2, 38, odd=True)
    assert odd.name == "moller-torus" and odd.degree == 5 and odd.value == 38


def test_an_torus_bounds():
    assert psu_torus_bound(2, 1) == 3
    assert psu_torus_bound(2, 2) == 7
    with pytest.raises(SearchCapError):
        psu_torus_bound(2, 4, cap=10)


def test_space_bound_reports():
    (cp,) = space_bound_reports(complex_projective(3), 3)
    assert cp.name == "cpn" and cp.value == 40
    reports = {r.name: r for r in space_bound_reports(sphere(8), 7, 240)}
    assert reports["moller-sphere"].value == 240
    assert reports["stroud"].degree == 6
    assert all(r.satisfied for r in reports.values())
    an = {r.name for r in space_bound_reports(trig_torus(2, "an_root"), 3)}
    assert an == {"stroud", "psu-torus"}
    with pytest.raises(ValueError):
        space_bound_reports(simplex(2), -1)


def test_bound_reports_from_a_formula():
    reports = bound_reports(named_formula("platonic-octa"))
    assert {r.name for r in reports} == {"stroud", "moller-sphere"}
    moller = next(r for r in reports if r.name == "moller-sphere")
    assert moller.formula_size == 6 and moller.slack == 1
    too_small = bound_reports(named_formula("platonic-octa"), 5)
    assert not all(r.satisfied for r in too_small)
    unclaimed = Formula(simplex(1), [(Fraction(1), Fraction(0))], [Fraction(1)])
    with pytest.raises(ValueError):
        bound_reports(unclaimed)


def test_gauss_rule_is_sharp():
    report = sharp_check(gauss_quadrature(legendre_measure(), 3), 5)
    assert report.passed
    assert len(report.nodes) == 3
    assert report.to_json()["violations"] == []


def test_simpson_is_sharp_at_degree_three():
    simpson = lobatto_radau_quadrature(legendre_measure(), 3, "lobatto")
    assert sharp_check(simpson, 3).passed
    with pytest.raises(PreconditionError):
        sharp_check(simpson, 5)


def test_sharp_check_needs_an_interval():
    with pytest.raises(ValueError):
        sharp_check(named_formula("platonic-octa"), 3)


def test_covering_radius_and_distance():
    assert mpmath.almosteq(covering_radius(1, 1), mpmath.pi / 4)
    assert mpmath.almosteq(simplex_distance((1, 0), (0, 1)), mpmath.pi / 2)
    assert simplex_distance((1, 0, 0), (1, 0, 0)) == 0
    with pytest.raises(ValueError):
        simplex_distance((1, 0), (1, 0, 0))


def test_simplex_samples():
    points = simplex_samples(2, 64, seed=3)
    assert points.shape == (67, 3)
    assert points.min() >= 0
    assert abs(points.sum(axis=1) - 1).max() < 1e-12


@pytest.mark.parametrize("formula", [hadamard_simplex_formula(4), named_formula("as-tetra-8")])
def test_three_cubatures_form_a_net(formula):
    report = epsnet_check(formula, 3, samples=512)
    assert report.covered
    assert report.samples == 512 + 4
    assert report.worst_distance <= float(report.epsilon) * (1 + 1e-9)


def test_epsnet_arguments():
    with pytest.raises(ValueError):
        epsnet_check(hadamard_simplex_formula(4), 4)
    with pytest.raises(ValueError):
        epsnet_check(named_formula("platonic-octa"), 3)


def test_christoffel_scaling():
    fit = christoffel_scaling(2, [8, 16, 32])
    assert list(fit.table["t"]) == [8, 16, 32]
    assert fit.table["weight"].is_monotonic_decreasing
    assert -5 < fit.slope < -3
    assert fit.slope < fit.plain_slope < 0
    with pytest.raises(ValueError):
        christoffel_scaling(2, [16, 8])
    with pytest.raises(ValueError):
        christoffel_scaling(2, [8])


@pytest.mark.parametrize("a", [0, 1, 2, 3])
def test_longer_gauss_rules_pass_occupancy(a):
    # a 4-point rule has degree 7, checked against the 3-point Gauss rule
    rule = gauss_quadrature(jacobi_interval(a, 0), 4)
    assert sharp_check(rule, 5).passed


@pytest.mark.parametrize("n, degree, value", [(2, 5, 6), (15, 7, 1360), (1, 1, 2), (9, 1, 2)])
def test_moller_sphere_bound_values(n, degree, value):
    assert moller_sphere_bound(n, degree) == value


@pytest.mark.parametrize("n", [1, 2, 3])
def test_least_christoffel_weight_decays_like_t_to_minus_2n(n):
    fit = christoffel_scaling(n, [10, 20, 30, 40, 50, 60])
    assert abs(fit.slope + 2 * n) <= 0.3
    assert fit.slope < fit.plain_slope < 0
    assert (fit.table["weight"] > 0).all()
    if n < 3:
        assert abs(fit.plain_slope + 2 * n) <= 0.3


@pytest.mark.parametrize("n", [1, 2, 3])
def test_covering_radius_shrinks_like_one_over_t(n):
    at_50 = covering_radius(n, 50) * 50
    at_100 = covering_radius(n, 100) * 100
    assert abs(at_50 / at_100 - 1) < 0.02
    limit = mpmath.besseljzero(n - 1, 1) / 2
    assert abs(at_100 / limit - 1) < 0.03


@pytest.mark.parametrize("a", range(6))
def test_gauss_rules_meet_the_tail_bound_with_equality(a):
    measure = jacobi_interval(a, 0)
    for m in range(1, 6):
        report = sharp_check(gauss_quadrature(measure, m), 2 * m - 1)
        assert report.passed
        assert mpmath.almosteq(report.left_tail, report.gauss_weights[0], 1e-30)
        assert mpmath.almosteq(report.right_tail, report.gauss_weights[-1], 1e-30)


@pytest.mark.parametrize("a", [0, 2, 5])
@pytest.mark.parametrize("endpoint", [-1, 1])
def test_radau_and_lobatto_rules_pass_occupancy(a, endpoint):
    measure = jacobi_interval(a, 0)
    for t in (3, 5, 7):
        radau = lobatto_radau_quadrature(measure, t, "radau", endpoint=endpoint)
        assert sharp_check(radau, t).passed
        assert sharp_check(lobatto_radau_quadrature(measure, t, "lobatto"), t).passed


def _mixture(first: Formula, second: Formula, share: float) -> Formula:
    with mpmath.mp.workprec(256):
        share_m = mpmath.mpf(share)
        weights = [share_m * w for w in first.weights] + [(1 - share_m) * w for w in second.weights]
    return Formula(first.space, first.points + second.points, weights)


@pytest.mark.slow
def test_perturbed_positive_rules_pass_occupancy():
    rng = np.random.default_rng(11)
    for _ in range(100):
        a = int(rng.integers(0, 6))
        m = int(rng.integers(1, 5))
        measure = jacobi_interval(a, 0)
        degree = 2 * m - 1
        base = gauss_quadrature(measure, m + int(rng.integers(1, 3)))
        kind = ("gauss", "lobatto", "radau")[int(rng.integers(0, 3))]
        if kind == "gauss":
            correction = gauss_quadrature(measure, m)
        else:
            correction = lobatto_radau_quadrature(measure, degree, kind, endpoint=int(rng.choice([-1, 1])))
        rule = _mixture(base, correction, float(rng.uniform(0.05, 0.95)))
        assert sharp_check(rule, degree).passed


SIMPLEX_IDS = [entry.id for entry in CATALOG.values() if entry.space.startswith("simplex(")]


@pytest.mark.slow
@pytest.mark.parametrize("catalog_id", SIMPLEX_IDS)
def test_positive_simplex_catalog_formulas_are_nets(catalog_id):
    formula = named_formula(catalog_id)
    if classify(formula).code not in ("PI", "PB", "EI", "EB"):
        pytest.skip(f"{catalog_id} is not a positive formula in the simplex")
    report = epsnet_check(formula, formula.claimed_degree, samples=100_000)
    assert report.covered
