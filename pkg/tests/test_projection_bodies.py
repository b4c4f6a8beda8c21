import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lwlab.bodies import cube, default_point_count, gen_random_body, ngon, simplex
from lwlab.constants import PISTAR_STABILITY
from lwlab.errors import Unconverged
from lwlab.polytope import AffineMap, Subspace, apply_map
from lwlab.projection_bodies import (
    agj_constant,
    agj_section_check,
    cross_polytope_volume,
    inscribed_cross_polytope,
    petty_zhang_bounds,
    petty_zhang_check,
    pistar_norm,
    pistar_radial,
    pistar_section_volume,
    pistar_volume,
    radial_section_body,
    shadow,
    shadow_by_projection,
    shadows,
    theorem3_check,
    theorem3_constant,
)


def test_square_shadows(square):
    assert shadow(square, [1.0, 0.0]) == pytest.approx(1.0, rel=1e-12)
    diagonal = np.array([1.0, 1.0]) / math.sqrt(2.0)
    assert shadow(square, diagonal) == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_cube_diagonal_shadow(cube3):
    assert shadow(cube3, np.ones(3) / math.sqrt(3.0)) == pytest.approx(math.sqrt(3.0), rel=1e-12)
    np.testing.assert_allclose(shadows(cube3, np.eye(3)), np.ones(3), rtol=1e-12)


def test_shadow_needs_unit_direction(square):
    with pytest.raises(ValueError):
        shadow(square, [2.0, 0.0])


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(min_value=0, max_value=10**6))
def test_cauchy_formula_matches_projected_hull(n, seed):
    body = gen_random_body(n, default_point_count(n), seed=seed)
    theta = np.random.default_rng(seed).standard_normal(n)
    theta /= np.linalg.norm(theta)
    assert shadow(body, theta) == pytest.approx(shadow_by_projection(body, theta), rel=1e-9)


def test_polar_projection_norm(square):
    assert pistar_norm(square, [3.0, 0.0]) == pytest.approx(3.0)
    assert pistar_norm(square, [1.0, 1.0]) == pytest.approx(2.0)
    assert pistar_norm(square, [0.0, 0.0]) == 0.0
    assert pistar_radial(square, [0.0, 1.0]) == pytest.approx(1.0)


def test_polar_projection_body_of_square_is_the_l1_ball(square):
    assert pistar_volume(square) == pytest.approx(2.0, rel=1e-9)


def test_polar_projection_section_of_cube(cube3):
    sampled = radial_section_body(cube3, Subspace.coordinate([0, 1], 3))
    assert sampled.dim == 2
    assert sampled.volume == pytest.approx(2.0, rel=1e-9)
    assert sampled.relative_uncertainty <= 1e-3
    assert pistar_section_volume(cube3, Subspace.coordinate([0, 1], 3)) == sampled.volume


def test_radial_sampling_dimension_limits():
    with pytest.raises(ValueError):
        radial_section_body(cube(4), Subspace.full(4))


def test_polar_projection_body_of_cube_in_three_dimensions(cube3):
    sampled = radial_section_body(cube3)
    assert sampled.relative_uncertainty <= 1e-3
    assert sampled.volume <= 4.0 / 3.0 * (1 + 1e-12)
    assert sampled.volume == pytest.approx(4.0 / 3.0, rel=1e-2)


def test_radial_sampling_raises_when_unstable(random_body, monkeypatch):
    monkeypatch.setitem(PISTAR_STABILITY, 2, 0.0)
    with pytest.raises(Unconverged):
        radial_section_body(random_body(2, seed=1))


def test_petty_zhang_bounds():
    lower, upper = petty_zhang_bounds(2)
    assert lower == pytest.approx(1.5)
    assert upper == pytest.approx((math.pi / 2.0) ** 2)


@pytest.mark.parametrize(
    "body, expected", [(cube(2), 2.0), (simplex(2), 1.5), (ngon(64), (math.pi / 2.0) ** 2)]
)
def test_petty_zhang_products(body, expected):
    lower, upper = petty_zhang_check(body, "golden")
    assert lower.check_id == "petty-zhang.lower"
    assert upper.check_id == "petty-zhang.upper"
    assert lower.rhs == pytest.approx(expected, rel=1e-2)
    assert lower.passed and upper.passed


def test_petty_zhang_random_body(random_body):
    rows = petty_zhang_check(random_body(3, seed=2), "random")
    assert [row.status for row in rows] == ["pass", "pass"]
    assert rows[0].uncertainty > 0.0


def test_petty_zhang_dimension_limit():
    with pytest.raises(ValueError):
        petty_zhang_check(cube(4))


def test_cross_polytope_volume():
    assert cross_polytope_volume([1.0, 1.0]) == pytest.approx(2.0)
    assert cross_polytope_volume([1.0, 1.0, 1.0]) == pytest.approx(4.0 / 3.0)


def test_inscribed_cross_polytope_of_square(square):
    witness = inscribed_cross_polytope(square, Subspace.full(2), restarts=4, seed=3)
    np.testing.assert_allclose(witness.radii, [1.0, 1.0], atol=1e-6)
    assert witness.volume == pytest.approx(2.0, abs=1e-6)
    assert witness.certificate_ratio == pytest.approx(0.5, abs=1e-6)
    assert witness.dim == 2


def test_inscribed_cross_polytope_follows_rotations(random_body):
    body = random_body(2, seed=6)
    angle = 0.9
    turn = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
    turned = apply_map(body, AffineMap.from_linear(turn))
    witness = inscribed_cross_polytope(body, Subspace.full(2), restarts=8, seed=2)
    rotated = inscribed_cross_polytope(turned, Subspace.full(2), restarts=8, seed=2)
    assert rotated.volume == pytest.approx(witness.volume, rel=1e-8)
    carried = cross_polytope_volume(1.0 / shadows(turned, (turn @ witness.frame).T))
    assert carried == pytest.approx(rotated.volume, rel=1e-8)


def test_constants():
    assert agj_constant(3, 2) == pytest.approx(10.0 / 9.0)
    assert theorem3_constant(3, 2) == pytest.approx(10.0 / 36.0)


def test_agj_and_theorem3_on_cube(cube3):
    h = Subspace.coordinate([0, 1], 3)
    agj = agj_section_check(cube3, h, "cube:3")
    assert agj.check_id == "agj"
    assert agj.lhs == pytest.approx(10.0 / 9.0)
    assert agj.rhs == pytest.approx(2.0, rel=1e-9)
    row = theorem3_check(cube3, h, "cube:3", restarts=4)
    assert row.check_id == "thm3"
    assert row.lhs == pytest.approx(10.0 / 36.0, rel=1e-6)
    assert row.rhs == pytest.approx(1.0)
    assert row.status == "pass"


def test_theorem3_on_random_body(random_body):
    body = random_body(3, seed=21)
    h = Subspace.span([[1.0, 0.5, 0.0], [0.0, 1.0, -1.0]])
    radial = radial_section_body(body, h)
    assert agj_section_check(body, h, "random", radial).status == "pass"
    row = theorem3_check(body, h, "random", restarts=4, seed=1, radial=radial)
    assert row.status == "pass"
    assert row.witness["certificate_ratio"] <= 1.0 + 2e-3
