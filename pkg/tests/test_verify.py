import math
from fractions import Fraction

import mpmath
import pytest

from fibrature.lib.errors import ScalarModeError, UnsupportedMomentError
from fibrature.lib.formula import Formula
from fibrature.lib.measures import complex_projective, simplex, sphere, tabulated_interval, trig_torus, uniform_interval
from fibrature.lib.orthopoly import gauss_quadrature
from fibrature.lib.roots import mub_design
from fibrature.lib.verify import (
    character_norm,
    cp_design_check,
    enumerate_characters,
    max_degree,
    verify,
)

F = Fraction


def signed_axes(n, scale=1):
    points = []
    for i in range(n):
        for s in (1, -1):
            points.append(tuple(F(s * scale) if j == i else F(0) for j in range(n)))
    return points


def octahedron():
    return Formula(sphere(3), signed_axes(3), [F(1, 6)] * 6, 3, "octahedron")


def test_vertices_of_simplex():
    f = Formula(simplex(2), [(F(1), F(0), F(0)), (F(0), F(1), F(0)), (F(0), F(0), F(1))], [F(1, 3)] * 3)
    assert verify(f, 1).passed
    report = verify(f, 2)
    assert not report.passed
    assert report.first_failing_degree() == 2
    assert all(r.degree == 2 for r in report.failures)


def test_octahedron_is_a_three_design():
    assert verify(octahedron(), 3).passed
    assert max_degree(octahedron(), 6) == 3


def test_sphere_radius_is_scaled_out():
    square = Formula(
        sphere(2),
        [(F(1), F(1)), (F(1), F(-1)), (F(-1), F(1)), (F(-1), F(-1))],
        [F(1, 4)] * 4,
    )
    assert verify(square, 3).passed
    assert not verify(square, 4).passed


def test_pruning_does_not_change_the_answer():
    pruned = verify(octahedron(), 5)
    full = verify(octahedron(), 5, prune=False)
    assert pruned.passed == full.passed is False
    assert pruned.pruned > 0 and full.pruned == 0
    assert pruned.first_failing_degree() == full.first_failing_degree() == 4


def test_workers_give_the_same_report():
    single = verify(octahedron(), 4)
    threaded = verify(octahedron(), 4, workers=3)
    assert [r.alpha for r in single.residuals] == [r.alpha for r in threaded.residuals]


def test_float_mode_on_gauss_two():
    with mpmath.mp.workprec(256):
        root = 1 / mpmath.sqrt(3)
        f = Formula(uniform_interval(), [(-root,), (root,)], [mpmath.mpf(1) / 2] * 2)
    assert verify(f, 3, "float", 1e-40).passed
    assert verify(f, 3, "float", 1e-10).passed
    assert not verify(f, 4, "float", 1e-10).passed


def test_near_symmetric_float_data_is_not_pruned():
    with mpmath.mp.workprec(256):
        root = 1 / mpmath.sqrt(3)
        f = Formula(uniform_interval(), [(-root,), (root + mpmath.mpf("1e-11"),)], [mpmath.mpf(1) / 2] * 2)
    report = verify(f, 3, "float", 1e-12)
    assert report.pruned == 0
    assert report.first_failing_degree() == 1
    assert verify(f, 3, "float", 1e-9).passed


def test_float_mode_is_bigfloat_unless_fast():
    rule = gauss_quadrature(tabulated_interval([math.factorial(k) for k in range(30)]), 10)
    assert verify(rule, 19, "float").passed
    assert verify(rule, 19, "float", 1e-13).passed
    assert not verify(rule, 20, "float").passed
    fast = verify(rule, 19, "float", fast=True)
    assert fast.passed
    assert isinstance(fast.residuals[0].residual, float)
    assert not isinstance(verify(rule, 1, "float").residuals[0].residual, float)


def test_exact_mode_refuses_floats():
    f = Formula(uniform_interval(), [(mpmath.mpf(0),)], [mpmath.mpf(1)])
    with pytest.raises(ScalarModeError):
        verify(f, 1)


def test_projective_formulas_are_refused():
    f = Formula(complex_projective(1), [(F(1), F(0), F(0), F(0))], [F(1)])
    with pytest.raises(UnsupportedMomentError):
        verify(f, 1)


def test_report_json_lists_failures():
    payload = verify(octahedron(), 4).to_json()
    assert payload["passed"] is False
    assert payload["failures"]
    assert all(item["degree"] == 4 for item in payload["failures"])


def test_circle_characters_exact_and_float():
    points = [(F(j, 4),) for j in range(4)]
    f = Formula(trig_torus(1), points, [F(1, 4)] * 4)
    assert verify(f, 3).passed
    assert not verify(f, 4).passed
    assert verify(f, 3, "float", 1e-12).passed
    assert not verify(f, 4, "float", 1e-12).passed


def test_character_enumeration():
    assert len(enumerate_characters(2, 1)) == 5
    assert enumerate_characters(2, 1, half=True) == [(0, 0), (0, 1), (1, 0)]
    assert len(enumerate_characters(3, 2)) == 25
    assert len(enumerate_characters(2, 1, "an_root")) == 7
    assert len(enumerate_characters(2, 2, "an_root")) == 19


def test_character_norms():
    assert character_norm((2, -3), "l1") == 5
    assert character_norm((1,), "an_root") == 1
    assert character_norm((1, 1), "an_root") == 1
    assert character_norm((2, -1), "an_root") == 3


def test_mub_lines_form_a_two_design():
    lines = mub_design(3)
    report = cp_design_check(lines.vectors, 2, norm=lines.common_norm())
    assert report.passed and report.target == F(1, 6)
    assert not cp_design_check(lines.vectors, 3, norm=3).passed


def test_orthonormal_basis_is_only_a_one_design():
    basis = [tuple(F(int(2 * i == j)) for j in range(6)) for i in range(3)]
    assert cp_design_check(basis, 1).passed
    assert not cp_design_check(basis, 2).passed
    with pytest.raises(ValueError):
        cp_design_check([tuple(F(0) for _ in range(4))], 1)


def test_design_check_rejects_lines_of_the_wrong_length():
    with pytest.raises(ValueError):
        cp_design_check([(F(2), F(0))], 1)
    with pytest.raises(ValueError):
        cp_design_check(mub_design(3).vectors, 2)
    with pytest.raises(ValueError):
        cp_design_check([(F(1), F(0))], 1, norm=0)
    assert cp_design_check([(F(2), F(0))], 1, norm=4).passed
    with pytest.raises(ValueError):
        cp_design_check([(1.0, 0.0), (0.0, 1.1)], 1, mode="float")
