import json
import logging
import math
from fractions import Fraction

import numpy as np
import pytest

from lwlab.bodies import box2d, cube, ngon, parallelogram_fhl
from lwlab.errors import NotAUniformCover
from lwlab.frames import haar_frames
from lwlab.lambda_search import (
    UniformCover,
    certificate_basis,
    exact_planar_ratio,
    lambda_cover_ratio,
    lambda_cover_search,
    lambda_lw_search,
    lambda_ratio,
    lambda_tilde,
    lambda_tilde_planar,
    meyer_constant,
    restricted_lw_constant,
    theorem4_frame,
    theorem4_ratio,
    validate_cover,
)
from lwlab.moments import hensley_upper, isotropic_transform
from lwlab.polytope import AffineMap, Subspace, apply_map, section, volume

DIAGONALS = np.array([[1.0, -1.0], [1.0, 1.0]]) / math.sqrt(2.0)


def test_square_ratios(square):
    assert lambda_ratio(square, np.eye(2)) == pytest.approx(1.0, rel=1e-12)
    assert lambda_ratio(square, DIAGONALS) == pytest.approx(0.5, rel=1e-12)


def test_cube_coordinate_ratio(cube3):
    assert lambda_ratio(cube3, np.eye(3)) == pytest.approx(1.0, rel=1e-12)


def test_parallelogram_ratio_is_exactly_three_fifths():
    body = parallelogram_fhl()
    exact = exact_planar_ratio(body.vertices.tolist(), (2, 1))
    assert exact == Fraction(3, 5)
    w1 = np.array([2.0, 1.0]) / math.sqrt(5.0)
    frame = np.column_stack([w1, [-w1[1], w1[0]]])
    assert lambda_ratio(body, frame) == pytest.approx(0.6, rel=1e-12)


def test_exact_ratio_of_square():
    square = [(Fraction(-1, 2), Fraction(-1, 2)), (Fraction(1, 2), Fraction(-1, 2)),
              (Fraction(1, 2), Fraction(1, 2)), (Fraction(-1, 2), Fraction(1, 2))]
    assert exact_planar_ratio(square, (1, 0)) == 1
    assert exact_planar_ratio(square, (1, 1)) == Fraction(1, 2)


@pytest.mark.parametrize("angle", [0.01, 0.3, 1.0, 2.5])
def test_disk_proxy_ratio_ignores_rotation(angle):
    body = ngon(64)
    c, s = math.cos(angle), math.sin(angle)
    rotated = np.array([[c, -s], [s, c]])
    assert lambda_ratio(body, rotated) == pytest.approx(lambda_ratio(body, np.eye(2)), rel=3e-3)


@pytest.mark.parametrize(
    "l, expected",
    [(1.0, 0.5), (math.sqrt(2.0), 0.8), (2.0, 16.0 / 17.0)],
)
def test_box_minimum(l, expected):
    result = lambda_tilde_planar(box2d(l))
    assert result.value == pytest.approx(expected, abs=1e-6)
    assert result.method == "scan"
    hx, hy = 1.0 / (2.0 * l), l / 2.0
    w1 = result.witness[:, 0]
    alignments = [abs(w1 @ d) / np.linalg.norm(d) for d in ([hx, hy], [hx, -hy])]
    assert math.acos(min(1.0, max(alignments))) <= 1e-4


def test_planar_scan_reports_its_grid():
    result = lambda_tilde_planar(box2d(2.0), resolution=1e-3)
    assert result.diagnostics["scan_steps"] == math.ceil((math.pi / 2) / 1e-3)
    assert result.diagnostics["min_vertex_gap"] > 0.0
    assert result.value <= result.certificate


def test_planar_scan_warns_when_coarser_than_the_vertex_gap(caplog):
    heptagon = ngon(7)
    with caplog.at_level(logging.WARNING, logger="lwlab"):
        coarse = lambda_tilde_planar(heptagon, resolution=0.6)
    assert coarse.diagnostics["min_vertex_gap"] == pytest.approx(math.pi / 7)
    assert any("vertex angular gap" in r.getMessage() for r in caplog.records)
    caplog.clear()
    with caplog.at_level(logging.WARNING, logger="lwlab"):
        fine = lambda_tilde_planar(heptagon)
    assert not [r for r in caplog.records if "vertex angular gap" in r.getMessage()]
    assert fine.value <= coarse.value + 1e-9


def test_planar_scan_beats_the_parallelogram_basis():
    result = lambda_tilde_planar(parallelogram_fhl())
    assert result.value <= 0.6 + 1e-9
    np.testing.assert_allclose(result.witness.T @ result.witness, np.eye(2), atol=1e-12)


def test_planar_scan_needs_planar_body(cube3):
    with pytest.raises(ValueError):
        lambda_tilde_planar(cube3)


def test_singleton_cover():
    check = validate_cover(UniformCover.singletons(3))
    assert check.p == 3.0
    assert check.weighted_dims == 3.0
    assert check.coverage == (1.0, 1.0, 1.0)


def test_pairs_cover():
    cover = UniformCover(4, ((0, 1), (2, 3), (0, 2), (1, 3)), (0.5,) * 4)
    check = validate_cover(cover)
    assert check.p == 2.0
    assert check.weighted_dims == 4.0


def test_invalid_cover_names_first_index():
    cover = UniformCover.from_json({"sets": [[1, 2], [2, 3]], "weights": [0.5, 0.5]}, 3)
    with pytest.raises(NotAUniformCover) as excinfo:
        validate_cover(cover)
    assert excinfo.value.index == 1


def test_cover_index_out_of_range():
    with pytest.raises(NotAUniformCover) as excinfo:
        validate_cover(UniformCover.from_json({"sets": [[1, 4]], "weights": [1.0]}, 3))
    assert excinfo.value.index == 4


def test_cover_weights_must_be_positive():
    with pytest.raises(NotAUniformCover):
        validate_cover(UniformCover(2, ((0,), (1,), (0, 1)), (1.0, 1.0, 0.0)))


def test_cover_json_round_trip(tmp_path):
    cover = UniformCover(4, ((0, 1), (2, 3), (0, 2), (1, 3)), (0.5,) * 4)
    path = tmp_path / "pairs.json"
    path.write_text(json.dumps(cover.to_json()), encoding="utf-8")
    assert UniformCover.load(path, 4) == cover
    assert cover.to_json()["sets"][0] == [1, 2]


def test_cover_json_length_mismatch():
    with pytest.raises(NotAUniformCover):
        UniformCover.from_json({"sets": [[1]], "weights": [0.5, 0.5]}, 1)


def test_trivial_cover_ratio_is_one(random_body):
    body = random_body(3, seed=4)
    assert lambda_cover_ratio(body, UniformCover.trivial(3), np.eye(3)) == pytest.approx(1.0, abs=1e-12)


def test_singleton_cover_matches_lambda_ratio(random_body):
    body = random_body(3, seed=4)
    frame = certificate_basis(body)
    assert lambda_cover_ratio(body, UniformCover.singletons(3), frame) == pytest.approx(
        lambda_ratio(body, frame), rel=1e-12
    )


def test_cube_pairs_cover():
    cover = UniformCover(4, ((0, 1), (2, 3), (0, 2), (1, 3)), (0.5,) * 4)
    body = cube(4)
    assert lambda_cover_ratio(body, cover, np.eye(4)) == pytest.approx(1.0, rel=1e-12)
    result = lambda_cover_search(body, cover, restarts=2, seed=0)
    assert result.value <= 1.0 + 1e-9
    assert result.certificate == pytest.approx(1.0, rel=1e-12)


def test_cover_search_agrees_with_lambda_tilde(random_body):
    body = random_body(3, seed=9)
    tilde = lambda_tilde(body, restarts=3, seed=5)
    cover = lambda_cover_search(body, UniformCover.singletons(3), restarts=3, seed=5)
    assert cover.value == pytest.approx(tilde.value, rel=1e-8)


def test_lambda_tilde_is_below_its_certificate(random_body):
    body = random_body(3, seed=13)
    result = lambda_tilde(body, restarts=3, seed=1)
    assert result.value <= result.certificate
    assert result.sense == "min"
    np.testing.assert_allclose(result.witness.T @ result.witness, np.eye(3), atol=1e-10)
    assert result.value == pytest.approx(lambda_ratio(body, result.witness), rel=1e-10)


def test_certificate_basis_of_box():
    np.testing.assert_allclose(certificate_basis(box2d(2.0)), np.eye(2)[:, [1, 0]], atol=1e-12)


def test_loomis_whitney_search_on_square(square):
    result = lambda_lw_search(square, restarts=3, seed=0)
    assert result.sense == "max"
    assert result.value == pytest.approx(1.0, abs=1e-8)


def test_theorem4_ratio_of_cube(cube3):
    h = Subspace.coordinate([0, 1], 3)
    section_perp, factors, c_emp = theorem4_ratio(cube3, h, np.eye(3)[:, :2])
    assert section_perp == pytest.approx(1.0)
    np.testing.assert_allclose(factors, [1.0, 1.0])
    assert c_emp == pytest.approx(1.0, rel=1e-12)


def test_theorem4_frame_lies_in_the_subspace(cube3):
    h = Subspace.coordinate([0, 1], 3)
    frame, report = theorem4_frame(cube3, h, restarts=2, seed=0)
    assert frame.shape == (3, 2)
    np.testing.assert_allclose(frame[2], 0.0, atol=1e-12)
    assert 0.0 < report.c_emp <= 1.0 + 1e-9
    assert report.implied_constant == pytest.approx((report.c_emp / 2.0) ** 0.5)


def test_restricted_and_meyer_constants():
    assert restricted_lw_constant(3, 2) == pytest.approx(4.0 / 3.0)
    assert restricted_lw_constant(4, 3) == pytest.approx(27.0 / 16.0)
    assert meyer_constant(2) == pytest.approx(0.5)


def test_lambda_tilde_ignores_rotations(random_body):
    body = random_body(2, seed=17)
    angle = 1.3
    turn = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
    turned = apply_map(body, AffineMap.from_linear(turn))
    base = lambda_tilde(body, restarts=12, seed=4)
    moved = lambda_tilde(turned, restarts=12, seed=8)
    assert moved.value == pytest.approx(base.value, rel=1e-8)


@pytest.mark.parametrize("n, seed", [(2, 3), (3, 11), (4, 2)])
def test_isotropic_sections_are_sandwiched(random_body, n, seed):
    iso = isotropic_transform(random_body(n, seed=seed))
    lower = (2.0 * math.sqrt(3.0) * iso.L) ** -n
    upper = (hensley_upper(n) / iso.L) ** n
    for frame in haar_frames(n, 3, seed) + [np.eye(n)]:
        product = float(np.prod([volume(section(iso.body, Subspace.hyperplane(w))) for w in frame.T]))
        assert lower * (1 - 1e-9) <= product <= upper * (1 + 1e-9)
        assert lambda_ratio(iso.body, frame) <= (2.0 * math.sqrt(3.0) * iso.L) ** n * (1 + 1e-9)


def test_theorem4_frame_follows_rotations(random_body):
    body = random_body(3, seed=3)
    h = Subspace.span([[1.0, 0.2, 0.0], [0.0, 0.5, 1.0]])
    turn = haar_frames(3, 1, seed=12)[0]
    turned = apply_map(body, AffineMap.from_linear(turn))
    frame, report = theorem4_frame(body, h, restarts=2, seed=0)
    moved_frame, moved = theorem4_frame(turned, Subspace(turn @ h.basis), restarts=2, seed=0)
    np.testing.assert_allclose(moved_frame, turn @ frame, atol=1e-6)
    assert moved.c_emp == pytest.approx(report.c_emp, rel=1e-6)
