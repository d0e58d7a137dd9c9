from fractions import Fraction

import pytest

from fibrature.lib.errors import FormulaFormatError
from fibrature.lib.exact import quadratic
from fibrature.lib.roots import (
    ComplexVectorSet,
    bw16_short_vectors,
    e8_roots,
    embed_eisenstein,
    i_times,
    k12_short_vectors,
    mub_design,
    named_vector_set,
    omega_times,
)
from fibrature.lib.verify import verify


def test_ring_arithmetic():
    z = (2, 5)
    assert omega_times(omega_times(omega_times(z))) == z
    assert i_times(i_times(z)) == (-2, -5)
    assert embed_eisenstein([(0, 1)]) == (Fraction(-1, 2), quadratic(0, Fraction(1, 2), 3))


@pytest.mark.parametrize("position, norm", [("eisenstein", 3), ("gaussian", 4), ("real", 8)])
def test_e8_positions(position, norm):
    roots = e8_roots(position)
    assert len(roots) == 240
    assert len(set(roots.vectors)) == 240
    assert roots.common_norm() == norm
    assert roots.is_exact


def test_unknown_position():
    with pytest.raises(ValueError):
        e8_roots("octonion")


def test_e8_real_is_a_seven_design():
    f = e8_roots("real").sphere_formula()
    assert verify(f, 7).passed
    assert not verify(f, 8).passed


@pytest.mark.slow
@pytest.mark.parametrize("position", ["eisenstein", "gaussian"])
def test_e8_complex_positions_are_seven_designs(position):
    assert verify(e8_roots(position).sphere_formula(), 7).passed


def test_k12_count_and_norm():
    k12 = k12_short_vectors()
    assert len(k12) == 756
    assert k12.common_norm() == 6


@pytest.mark.slow
def test_k12_is_a_five_design():
    assert verify(k12_short_vectors().sphere_formula(), 5).passed


def test_unit_sphere_formula_is_float():
    f = e8_roots("eisenstein").sphere_formula(unit=True)
    assert not f.is_exact
    assert verify(f, 5, "float", 1e-30).passed


def test_mub_designs():
    three = mub_design(3)
    assert len(three) == 12 and three.is_exact
    assert three.common_norm() == 3
    five = mub_design(5)
    assert len(five) == 30 and not five.is_exact
    with pytest.raises(ValueError):
        mub_design(4)
    with pytest.raises(ValueError):
        mub_design(2)


def test_named_vector_sets():
    assert len(named_vector_set("mub:3")) == 12
    assert named_vector_set("e8-gaussian").label == "e8-gaussian"
    with pytest.raises(KeyError):
        named_vector_set("leech")


def test_line_set_json():
    lines = mub_design(3)
    again = ComplexVectorSet.from_json(lines.to_json())
    assert again.vectors == lines.vectors
    assert again.ring == "eisenstein" and again.dim == 3
    with pytest.raises(FormulaFormatError):
        ComplexVectorSet.from_json({"ring": "eisenstein", "dim": 3})


def test_vector_shape_checks():
    with pytest.raises(ValueError):
        ComplexVectorSet("gaussian", 2, ((Fraction(1), Fraction(0)),))
    with pytest.raises(ValueError):
        ComplexVectorSet("quaternion", 1, ((Fraction(1), Fraction(0)),))
    uneven = ComplexVectorSet("gaussian", 1, ((Fraction(1), Fraction(0)), (Fraction(2), Fraction(0))))
    with pytest.raises(ValueError):
        uneven.common_norm()


@pytest.mark.slow
def test_bw16_count_and_norm():
    bw16 = bw16_short_vectors()
    assert len(bw16) == 4320
    assert bw16.ring == "real" and bw16.dim == 8
    bw16.common_norm()
