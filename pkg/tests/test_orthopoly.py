import math
from fractions import Fraction

import mpmath
import pytest

from fibrature.lib.errors import DegenerateMomentsError
from fibrature.lib.measures import jacobi_interval, tabulated_interval
from fibrature.lib.orthopoly import (
    gauss_quadrature,
    highest_jacobi_zero,
    jacobi_christoffel_weight,
    jacobi_leading,
    jacobi_norm_squared,
    jacobi_poly,
    jacobi_zeros,
    legendre_measure,
    lobatto_radau_quadrature,
    recurrence_from_moments,
)
from fibrature.lib.verify import verify

F = Fraction


def close(x, y, eps=1e-40):
    return abs(mpmath.mpf(x) - mpmath.mpf(y)) < eps


def test_legendre_polynomials():
    assert jacobi_poly(0, 0, 1).coefficients == (F(0), F(1))
    assert jacobi_poly(0, 0, 2).coefficients == (F(-1, 2), F(0), F(3, 2))
    assert jacobi_poly(0, 0, 3)(F(1, 2)) == F(-7, 16)


@pytest.mark.parametrize("a, b, t", [(0, 0, 4), (2, 1, 3), (3, 0, 5), (F(1, 2), F(-1, 2), 4)])
def test_normalization_and_leading_coefficient(a, b, t):
    p = jacobi_poly(a, b, t)
    expected = math.prod(F(a) + k for k in range(1, t + 1)) / math.factorial(t)
    assert p(1) == expected
    assert p.leading == jacobi_leading(a, b, t)


def test_norms_of_legendre():
    for t in range(6):
        assert jacobi_norm_squared(0, 0, t) == F(1, 2 * t + 1)


def test_parameter_checks():
    with pytest.raises(ValueError):
        jacobi_poly(-1, 0, 2)
    with pytest.raises(ValueError):
        jacobi_zeros(0, 0, 0)


def test_two_point_gauss():
    with mpmath.mp.workprec(256):
        f = gauss_quadrature(legendre_measure(), 2)
        root = 1 / mpmath.sqrt(3)
        assert close(f.points[0][0], -root) and close(f.points[1][0], root)
        assert all(close(w, F(1, 2)) for w in f.weights)
    assert f.claimed_degree == 3


@pytest.mark.parametrize("a, t", [(0, 5), (1, 4), (3, 6)])
def test_gauss_rules_reach_their_degree(a, t):
    f = gauss_quadrature(jacobi_interval(a, 0), t)
    assert verify(f, 2 * t - 1, "float", 1e-30).passed
    assert not verify(f, 2 * t, "float", 1e-30).passed


def test_tabulated_moments_give_the_same_rule():
    legendre = gauss_quadrature(legendre_measure(), 3)
    tabulated = gauss_quadrature(tabulated_interval([1, 0, F(1, 3), 0, F(1, 5), 0]), 3)
    for p, q in zip(legendre.points, tabulated.points):
        assert close(p[0], q[0])


def test_zeros_interlace_and_top_chain():
    zeros = jacobi_zeros(2, 0, 6)
    assert len(zeros) == 6
    assert all(x < y for x, y in zip(zeros, zeros[1:]))
    assert close(highest_jacobi_zero(2, 0, 6), zeros[-1])
    previous = jacobi_zeros(2, 0, 5)
    assert all(zeros[i] < previous[i] < zeros[i + 1] for i in range(5))


@pytest.mark.parametrize("a, t", [(0, 1), (0, 4), (2, 5)])
def test_christoffel_weight_matches_gauss(a, t):
    gauss = gauss_quadrature(jacobi_interval(a, 0), t)
    node = highest_jacobi_zero(a, 0, t)
    weight = jacobi_christoffel_weight(a, 0, t, node)
    assert close(weight, gauss.weights[-1], 1e-30)


def test_simpson_is_lobatto_three():
    f = lobatto_radau_quadrature(legendre_measure(), 3, "lobatto")
    assert len(f) == 3
    assert close(f.points[0][0], -1) and close(f.points[1][0], 0) and close(f.points[2][0], 1)
    assert close(f.weights[0], F(1, 6)) and close(f.weights[1], F(2, 3))
    assert verify(f, 3, "float", 1e-30).passed


def test_radau_two_points():
    f = lobatto_radau_quadrature(legendre_measure(), 2, "radau")
    assert len(f) == 2
    assert close(f.points[0][0], -1) and close(f.points[1][0], F(1, 3))
    assert close(f.weights[0], F(1, 4)) and close(f.weights[1], F(3, 4))


@pytest.mark.parametrize("kind, t", [("lobatto", 5), ("lobatto", 7), ("radau", 4), ("radau", 6)])
def test_lobatto_radau_degrees(kind, t):
    f = lobatto_radau_quadrature(legendre_measure(), t, kind)
    assert verify(f, t, "float", 1e-30).passed


def test_degenerate_moments():
    with pytest.raises(DegenerateMomentsError):
        recurrence_from_moments([F(1), F(0), F(0), F(0)], 2)
    with pytest.raises(DegenerateMomentsError):
        recurrence_from_moments([F(1), F(0)], 2)
