from fractions import Fraction

import pytest

from fibrature.lib.errors import FormulaFormatError, SearchCapError
from fibrature.lib.torus import (
    IntegerLattice,
    boost_even,
    circle_design,
    craig_lattice_an,
    craig_lattice_zn,
    cyclic_lattice,
    design_degree_structural,
    hex_design,
    hex_lattice,
    hight_bound,
    lattice_design,
    lattice_invariant_factors,
    min_distance,
    noskov_design,
    noskov_lattice,
    search_cyclic_lattice,
    subgroup_points,
    to_ambient,
)
from fibrature.lib.verify import verify


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_noskov_counts_and_distances(s):
    even = noskov_lattice(s, "even")
    odd = noskov_lattice(s, "odd")
    assert even.index == 2 * s * s
    assert odd.index == s * s + (s + 1) ** 2
    assert min_distance(even, 2 * s + 2) == 2 * s
    assert min_distance(odd, 2 * s + 3) == 2 * s + 1


@pytest.mark.parametrize("s", [1, 2, 3])
def test_noskov_designs_verify_exactly(s):
    even = noskov_design(s, "even")
    assert len(even) == 2 * s * s
    assert verify(even.formula, 2 * s - 1).passed
    assert not verify(even.formula, 2 * s).passed
    odd = noskov_design(s, "odd")
    assert verify(odd.formula, 2 * s).passed
    assert not verify(odd.formula, 2 * s + 1).passed


@pytest.mark.parametrize("d, count", [(2, 3), (3, 7), (4, 12), (5, 19), (6, 27), (7, 37)])
def test_hexagonal_counts(d, count):
    assert hex_lattice(d).index == count
    assert min_distance(hex_lattice(d), d + 1) == d


@pytest.mark.parametrize("d", [3, 4, 5])
def test_hexagonal_designs_verify_exactly(d):
    design = hex_design(d)
    assert design.formula.space.norm == "an_root"
    assert verify(design.formula, d - 1).passed
    assert not verify(design.formula, d).passed


def test_circle_design():
    design = circle_design(3)
    assert len(design) == 4 and design.degree == 3
    assert len(circle_design(4)) == 6
    assert verify(circle_design(5).formula, 5).passed
    with pytest.raises(ValueError):
        circle_design(-1)


def test_craig_zn_distance_and_boost():
    lattice = craig_lattice_zn(2, 1, 5)
    assert lattice.index == 5
    assert min_distance(lattice, 6) == 3
    boosted = craig_lattice_zn(2, 1, 5, boost=True)
    assert boosted.index == 10
    assert min_distance(boosted, 6) == 4
    assert all(sum(row) % 2 == 0 for row in boosted.character_basis)
    assert not boosted.contains((1, 2))


def test_craig_zn_design_degree():
    lattice = craig_lattice_zn(3, 2, 7, boost=True)
    design = subgroup_points(lattice, degree=5)
    assert len(design) == lattice.index
    assert verify(design.formula, 5, "float", 1e-12).passed


def test_craig_an_index():
    lattice = craig_lattice_an(2, 1, 3)
    assert lattice.norm == "an_root"
    assert lattice.index == 3
    assert design_degree_structural(lattice, 6) >= 1
    design = lattice_design(lattice)
    assert verify(design.formula, design.degree).passed


@pytest.mark.parametrize("n, t, p", [(2, 1, 5), (3, 1, 7), (4, 2, 11), (4, 3, 11), (6, 3, 13)])
def test_craig_zn_minimum_distance(n, t, p):
    lattice = craig_lattice_zn(n, t, p)
    with pytest.raises(SearchCapError):
        min_distance(lattice, 2 * t)
    boosted = craig_lattice_zn(n, t, p, boost=True)
    with pytest.raises(SearchCapError):
        min_distance(boosted, 2 * t + 1)
    assert boosted.index == 2 * p ** min(n, t)


def test_craig_parameter_checks():
    with pytest.raises(ValueError):
        craig_lattice_zn(2, 1, 3)
    with pytest.raises(ValueError):
        craig_lattice_zn(2, 1, 9)
    with pytest.raises(ValueError):
        craig_lattice_zn(2, 1, 5, indices=[1, 4])
    with pytest.raises(ValueError):
        craig_lattice_zn(2, 3, 5)
    with pytest.raises(ValueError):
        craig_lattice_an(3, 1, 7, indices=[0, 1, 1, 2])


def test_lattice_membership_and_basis_change():
    lattice = noskov_lattice(1, "even")
    assert lattice.contains((2, 0))
    assert not lattice.contains((1, 0))
    assert boost_even(lattice) is lattice
    moved = lattice.transformed([[1, 1], [0, 1]])
    assert moved.index == lattice.index
    assert moved.contains((2, 0))
    with pytest.raises(ValueError):
        lattice.transformed([[2, 0], [0, 1]])


def test_lattice_validation_and_json():
    with pytest.raises(ValueError):
        IntegerLattice(2, ((1, 0), (2, 0)))
    with pytest.raises(ValueError):
        IntegerLattice(3, ((1, 0, 0), (0, 1, -1)), "an_root")
    lattice = hex_lattice(4)
    assert IntegerLattice.from_json(lattice.to_json()) == lattice
    with pytest.raises(FormulaFormatError):
        IntegerLattice.from_json({"basis": [[1]]})


def test_to_ambient():
    assert to_ambient((1,)) == (1, -1)
    assert to_ambient((1, 2)) == (1, 1, -2)


def test_subgroup_points_are_the_dual_group():
    design = noskov_design(1, "even")
    assert sorted(design.formula.points) == [(Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(1, 2))]
    assert all(w == Fraction(1, 2) for w in design.formula.weights)
    assert lattice_invariant_factors(noskov_lattice(1, "even")) == [2]
    assert lattice_invariant_factors(cyclic_lattice([7, 11], 38)) == [38]


def test_hight_bound_and_octahedral_design():
    assert hight_bound(3, 6, Fraction(18, 19), Fraction(4, 3)) == 38
    with pytest.raises(ValueError):
        hight_bound(3, 6, 0, 1)
    lattice = search_cyclic_lattice(3, 38, 6)
    assert lattice.index == 38
    assert min_distance(lattice, 7) == 6
    design = subgroup_points(lattice, degree=5)
    assert verify(design.formula, 5).passed


def test_cyclic_search_gives_up():
    with pytest.raises(SearchCapError) as info:
        search_cyclic_lattice(3, 37, 6)
    assert info.value.cap == 6


def test_min_distance_cap():
    with pytest.raises(SearchCapError):
        min_distance(noskov_lattice(4, "even"), 3)
