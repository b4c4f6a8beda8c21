import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lwlab.bodies import cross_polytope, cube, default_point_count, gen_random_body, ngon, simplex
from lwlab.constants import HENSLEY_LOWER
from lwlab.errors import NotNormalized
from lwlab.moments import (
    Ellipsoid,
    ball_isotropic_constant,
    covariance,
    hensley_bounds,
    hensley_product,
    hensley_upper,
    isotropic_constant,
    isotropic_transform,
    mc_covariance,
    principal_axes,
    second_moment,
    unit_ball_volume,
    z2_ellipsoid,
)
from lwlab.polytope import AffineMap, apply_map, normalize, volume


@pytest.mark.parametrize(
    "n, expected", [(0, 1.0), (1, 2.0), (2, math.pi), (3, 4.0 * math.pi / 3.0)]
)
def test_unit_ball_volume(n, expected):
    assert unit_ball_volume(n) == pytest.approx(expected, rel=1e-14)


def test_second_moment_of_interval():
    interval, _ = normalize(cube(1))
    assert second_moment(cube(1, side=2.0))[0, 0] == pytest.approx(2.0 / 3.0)
    assert second_moment(interval)[0, 0] == pytest.approx(1.0 / 12.0)


def test_cube_covariance(cube3):
    np.testing.assert_allclose(covariance(cube3), np.eye(3) / 12.0, atol=1e-14)


def test_covariance_needs_normalized_body():
    with pytest.raises(NotNormalized):
        covariance(cube(2, side=2.0))


@pytest.mark.parametrize(
    "body, expected, tol",
    [
        (cube(2), 1.0 / math.sqrt(12.0), 1e-12),
        (cube(3), 1.0 / math.sqrt(12.0), 1e-12),
        (simplex(2), 1.0 / (math.sqrt(6.0) * 3.0**0.25), 1e-12),
        (ngon(64), 1.0 / (2.0 * math.sqrt(math.pi)), 1e-3),
    ],
)
def test_isotropic_constants(body, expected, tol):
    assert isotropic_constant(body) == pytest.approx(expected, abs=tol)


def test_isotropic_constant_is_affine_invariant(cube3):
    linear = np.array([[2.0, 1.0, 0.0], [0.0, 1.0, -1.0], [0.5, 0.0, 3.0]])
    image = apply_map(cube3, AffineMap(linear, np.array([1.0, 2.0, 3.0])))
    assert isotropic_constant(image) == pytest.approx(isotropic_constant(cube3), rel=1e-10)


def test_isotropic_transform(random_body):
    body = random_body(3, seed=4)
    data = isotropic_transform(body)
    assert data.L == pytest.approx(isotropic_constant(body), rel=1e-12)
    assert volume(data.body) == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(second_moment(data.body), data.L**2 * np.eye(3), atol=1e-9)
    assert data.residual < 1e-8
    image = apply_map(body, data.transform)
    np.testing.assert_allclose(np.sort(image.vertices, axis=0), np.sort(data.body.vertices, axis=0), atol=1e-9)


def test_ball_floor_lies_below_polytopes():
    assert ball_isotropic_constant(2) == pytest.approx(1.0 / (2.0 * math.sqrt(math.pi)))
    for n in (2, 3):
        assert ball_isotropic_constant(n) < isotropic_constant(cube(n))


def test_principal_axes_sorted_descending():
    axes = principal_axes(np.diag([1.0, 3.0, 2.0]))
    np.testing.assert_allclose(axes, np.eye(3)[:, [1, 2, 0]], atol=1e-12)


def test_principal_axes_tied_eigenvalues_use_coordinate_axes():
    axes = principal_axes(np.diag([1.0, 1.0, 2.0]))
    np.testing.assert_allclose(axes, np.eye(3)[:, [2, 0, 1]], atol=1e-12)
    np.testing.assert_allclose(principal_axes(np.eye(3)), np.eye(3), atol=1e-12)


def test_principal_axes_sign_rule():
    angle = math.pi / 6.0
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    axes = principal_axes(Ellipsoid(rot @ np.diag([3.0, 1.0]) @ rot.T))
    np.testing.assert_allclose(axes[:, 0], [c, s], atol=1e-12)
    np.testing.assert_allclose(axes[:, 1], [s, -c], atol=1e-12)


def test_z2_ellipsoid_support(cube3):
    ellipsoid = z2_ellipsoid(cube3)
    assert ellipsoid.support([1.0, 0.0, 0.0]) == pytest.approx(1.0 / math.sqrt(12.0))
    np.testing.assert_allclose(ellipsoid.supports(np.eye(3)), np.full(3, 1.0 / math.sqrt(12.0)))
    assert ellipsoid.volume == pytest.approx(4.0 * math.pi / 3.0 * 12.0**-1.5)


def test_hensley_equality_cases():
    assert hensley_product(cube(3), [1.0, 0.0, 0.0]) == pytest.approx(HENSLEY_LOWER, rel=1e-12)
    l1_ball, _ = normalize(cross_polytope(2))
    assert hensley_product(l1_ball, [1.0, 0.0]) == pytest.approx(hensley_upper(2), rel=1e-9)
    assert hensley_bounds(2) == (HENSLEY_LOWER, pytest.approx(1.0 / math.sqrt(6.0)))


def test_hensley_needs_unit_direction(cube3):
    with pytest.raises(ValueError):
        hensley_product(cube3, [1.0, 1.0, 0.0])


@settings(max_examples=12, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(min_value=0, max_value=10**6))
def test_hensley_bounds_hold(n, seed):
    body = gen_random_body(n, default_point_count(n), seed=seed)
    rng = np.random.default_rng(seed)
    theta = rng.standard_normal(n)
    theta /= np.linalg.norm(theta)
    lower, upper = hensley_bounds(n)
    value = hensley_product(body, theta)
    assert lower - 1e-9 <= value <= upper + 1e-9


def test_monte_carlo_covariance_agrees_with_exact(random_body):
    body = random_body(2, seed=6)
    np.testing.assert_allclose(mc_covariance(body, samples=400_000, seed=1), covariance(body), atol=3e-3)
