from fractions import Fraction

import mpmath
import pytest

from fibrature.lib.errors import ScalarFieldError
from fibrature.lib.exact import (
    QuadraticScalar,
    enumerate_monomials,
    format_scalar,
    monomial_count,
    parse_scalar,
    quadratic,
    scalar_sign,
    scalar_tag,
    sqrt_rational,
    to_mpf,
)


def test_quadratic_collapses_to_fraction():
    value = quadratic(Fraction(1, 2), 0, 3)
    assert isinstance(value, Fraction)
    assert value == Fraction(1, 2)


def test_square_of_sqrt3_is_rational():
    root = quadratic(0, 1, 3)
    square = root * root
    assert isinstance(square, Fraction)
    assert square == 3


def test_product_with_conjugate_is_norm():
    x = QuadraticScalar(2, 1, 5)
    assert x * x.conjugate() == Fraction(-1)
    assert x.norm() == -1


def test_division_and_inverse():
    x = QuadraticScalar(1, 1, 2)
    assert x * x.inverse() == 1
    assert (x / x) == 1
    assert Fraction(1) / x == x.inverse()


def test_mixing_fields_raises():
    with pytest.raises(ScalarFieldError):
        QuadraticScalar(0, 1, 2) + QuadraticScalar(0, 1, 3)


def test_bad_radicands():
    with pytest.raises(ScalarFieldError):
        QuadraticScalar(0, 1, 4)
    with pytest.raises(ScalarFieldError):
        QuadraticScalar(0, 1, 1)


@pytest.mark.parametrize(
    "a, b, d, sign",
    [
        (1, 1, 2, 1),
        (-1, -1, 2, -1),
        (3, -2, 2, 1),  # 3 - 2.828
        (1, -1, 2, -1),
        (-2, 1, 3, -1),
        (-1, 1, 3, 1),
    ],
)
def test_sign_without_floats(a, b, d, sign):
    assert scalar_sign(QuadraticScalar(a, b, d)) == sign


def test_ordering_against_rationals():
    root2 = sqrt_rational(2)
    assert Fraction(7, 5) < root2 < Fraction(3, 2)


def test_sqrt_rational_pulls_out_squares():
    assert sqrt_rational(Fraction(9, 4)) == Fraction(3, 2)
    value = sqrt_rational(Fraction(1, 2))
    assert isinstance(value, QuadraticScalar)
    assert value.d == 2 and value.a == 0 and value.b == Fraction(1, 2)
    assert value * value == Fraction(1, 2)
    with pytest.raises(ValueError):
        sqrt_rational(-1)


def test_to_mpf_agrees_with_mpmath():
    with mpmath.mp.workprec(128):
        value = to_mpf(QuadraticScalar(1, 1, 5) / 2)
        assert abs(value - (1 + mpmath.sqrt(5)) / 2) < mpmath.mpf(2) ** -120


def test_scalar_tags():
    assert scalar_tag([Fraction(1), 2]) == "rational"
    assert scalar_tag([Fraction(1), QuadraticScalar(0, 1, 3)]) == "quadratic:3"
    assert scalar_tag([Fraction(1), mpmath.mpf(1)]) == "float"
    with pytest.raises(ScalarFieldError):
        scalar_tag([QuadraticScalar(0, 1, 3), QuadraticScalar(0, 1, 5)])


@pytest.mark.parametrize(
    "value, text",
    [
        (Fraction(-3, 4), "-3/4"),
        (Fraction(2), "2/1"),
        (QuadraticScalar(Fraction(1, 2), Fraction(-1, 6), 3), "1/2-1/6*sqrt(3)"),
    ],
)
def test_format_scalar(value, text):
    assert format_scalar(value) == text
    assert parse_scalar(text, tag="quadratic:3") == value


def test_parse_rejects_mismatched_tag():
    with pytest.raises(ScalarFieldError):
        parse_scalar("0/1+1/1*sqrt(5)", tag="quadratic:3")
    with pytest.raises(ScalarFieldError):
        parse_scalar("0/1+1/1*sqrt(5)", tag="rational")
    with pytest.raises(ValueError):
        parse_scalar("one half")


def test_monomial_enumeration_counts():
    monomials = enumerate_monomials(3, 4)
    assert len(monomials) == monomial_count(3, 4) == 35
    assert monomials[0] == (0, 0, 0)
    assert all(sum(alpha) <= 4 for alpha in monomials)
    even = enumerate_monomials(2, 4, even_only=True)
    assert sorted(even) == [(0, 0), (0, 2), (0, 4), (2, 0), (2, 2), (4, 0)]
