from fractions import Fraction

import pytest

from fibrature.lib.catalog import named_formula
from fibrature.lib.errors import MissingFiberDesignError, OrbitCapError, PreconditionError, SearchCapError
from fibrature.lib.fibration import (
    PIPELINE_COUNTS,
    ball4_7pt,
    default_fiber_designs,
    fiber_map,
    fiber_profile,
    gauss4_7pt,
    hopf_lift,
    hopf_lines,
    project_formula,
    s3_base,
    s3_expected_count,
    s3_family,
    sphere7_pipeline,
    twisted_product,
)
from fibrature.lib.measures import complex_projective, jacobi_interval, simplex, sphere
from fibrature.lib.roots import e8_roots, mub_design
from fibrature.lib.torus import circle_design, min_distance
from fibrature.lib.verify import cp_design_check, verify


def test_fiber_map_targets():
    tau2 = fiber_map("tau2", sphere(8))
    assert tau2.target == simplex(3)
    assert tau2.degree_after(7) == 3
    tau1 = fiber_map("tau1", sphere(3))
    assert tau1.target == simplex(2)
    assert tau1.degree_after(5) is None
    assert fiber_map("hopf", sphere(4)).target == complex_projective(1)
    assert fiber_map("moment_pi", complex_projective(2)).target == simplex(2)
    archimedes = fiber_map("archimedes", sphere(3))
    assert archimedes.target == jacobi_interval(0, 0)
    assert archimedes.degree_after(3) == 3


@pytest.mark.parametrize(
    "kind, source",
    [("spin", sphere(4)), ("tau2", sphere(3)), ("tau2", sphere(2)), ("hopf", sphere(3)), ("archimedes", sphere(4))],
)
def test_fiber_map_rejects_bad_sources(kind, source):
    with pytest.raises(ValueError):
        fiber_map(kind, source)


def test_archimedes_sends_the_octahedron_to_simpson():
    image = project_formula(named_formula("platonic-octa"), fiber_map("archimedes", sphere(3)))
    assert len(image) == 3
    assert sorted(image.weights) == [Fraction(1, 6), Fraction(1, 6), Fraction(2, 3)]
    assert image.claimed_degree == 3
    assert verify(image, 3).passed


def test_tau2_of_e8_is_a_tetrahedral_three_cubature():
    roots = e8_roots("eisenstein").sphere_formula().with_claim(7)
    image = project_formula(roots, fiber_map("tau2", sphere(8)))
    assert image.is_exact
    assert len(image) == 8
    assert image.claimed_degree == 3
    assert verify(image, 3).passed


def test_projection_needs_the_source_space():
    with pytest.raises(ValueError):
        project_formula(named_formula("platonic-octa"), fiber_map("tau2", sphere(4)))


@pytest.mark.parametrize("position, count", [("eisenstein", 40), ("gaussian", 60)])
def test_hopf_lines_of_e8(position, count):
    lines = hopf_lines(e8_roots(position))
    assert len(lines) == count
    assert lines.label == f"e8-{position}-lines"
    assert sum(lines.weights) == 1
    assert cp_design_check(lines.vectors, 3, weights=lines.weights, norm=lines.common_norm()).passed


def test_hopf_lift_of_mub_lines():
    lines = mub_design(3)
    lifted = hopf_lift(lines, 2)
    assert len(lifted) == 72
    assert lifted.space == sphere(6)
    assert lifted.claimed_degree == 5
    assert verify(lifted, 5, "float", 1e-30).passed


def test_hopf_lift_arguments():
    with pytest.raises(ValueError):
        hopf_lift(mub_design(3), -1)


def test_fiber_profile_of_lobatto_base():
    profile = fiber_profile(s3_base(1))
    assert profile.zero_coordinates == ((0,), (1,)) or profile.zero_coordinates == ((1,), (0,))
    assert profile.subtorus_dimensions() == [1]
    assert profile.generic == (False, False)
    assert len(fiber_profile(s3_base(3)).support(1)) == 2


def test_default_fiber_designs():
    designs = default_fiber_designs([0, 1, 2, 3], 3)
    assert sorted(designs) == [1, 2, 3]
    assert all(design.degree >= 3 for design in designs.values())
    assert len(designs[2]) == 8
    with pytest.raises(ValueError):
        default_fiber_designs([1], -1)


def test_craig_fiber_design_reaches_its_claimed_degree():
    for s in (9, 15):
        design = default_fiber_designs([3], s)[3]
        assert design.degree == s
        with pytest.raises(SearchCapError):
            min_distance(design.lattice, s)
    with pytest.raises(OrbitCapError):
        default_fiber_designs([3], 15, cap=1000)


def test_twisted_product_checks_its_fibers():
    base = s3_base(1)
    with pytest.raises(MissingFiberDesignError):
        twisted_product(base, {}, 3)
    with pytest.raises(PreconditionError):
        twisted_product(base, {1: circle_design(1)}, 3)
    with pytest.raises(ValueError):
        twisted_product(base, {1: circle_design(3)}, 3, target="ball")
    with pytest.raises(ValueError):
        twisted_product(base, {1: circle_design(3)}, 3, target="cylinder")


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_s3_family(s):
    f = s3_family(s)
    assert len(f) == s3_expected_count(s)
    assert f.claimed_degree == 2 * s + 1
    assert verify(f, 2 * s + 1, "float", 1e-30).passed


def test_s3_counts():
    assert [s3_expected_count(s) for s in range(1, 7)] == [8, 24, 48, 110, 168, 308]


def test_rotated_fibers_keep_the_degree():
    base = s3_base(2)
    designs = default_fiber_designs(fiber_profile(base).subtorus_dimensions(), 5)
    f = twisted_product(base, designs, 5, rotate=True)
    assert verify(f, 5, "float", 1e-30).passed


def test_ball_pipeline():
    f = ball4_7pt()
    assert len(f) == PIPELINE_COUNTS["ball4-7pt"]
    assert verify(f, 7, "float", 1e-30).passed


def test_gaussian_pipeline():
    f = gauss4_7pt()
    assert len(f) == PIPELINE_COUNTS["gauss4-7pt"]
    assert f.claimed_degree == 9
    assert verify(f, 9, "float", 1e-6).passed


def test_sphere_pipeline_count():
    f = sphere7_pipeline(4)
    assert len(f) == 2886
    assert f.space == sphere(8)


@pytest.mark.slow
def test_sphere_pipeline_degree():
    assert verify(sphere7_pipeline(4, workers=2), 7, "float", 1e-30).passed
