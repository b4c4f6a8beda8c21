import json

import numpy as np
import pytest

from lwlab.bodies import (
    BodySpec,
    body_from_json,
    box2d,
    default_point_count,
    gen_random_body,
    load_body,
    ngon,
    parallelogram_fhl,
    random_body_id,
    resolve_body,
    save_body,
    trial_seed,
)
from lwlab.errors import BodySpecError, DegenerateInput
from lwlab.polytope import barycenter, is_normalized, is_symmetric, volume


@pytest.mark.parametrize(
    "text, name, params, body_id",
    [
        ("cube:3", "cube", (3.0,), "cube:3"),
        ("box2d:2", "box2d", (2.0,), "box2d:2"),
        ("parallelogram-fhl", "parallelogram-fhl", (), "parallelogram-fhl"),
        ("random:3,20,seed=7", "random", (3.0, 20.0), "random:3,20,seed=7"),
        ("random:2,8,sym,seed=42", "random", (2.0, 8.0), "random:2,8,sym,seed=42"),
    ],
)
def test_parse_body_spec(text, name, params, body_id):
    spec = BodySpec.parse(text)
    assert spec.name == name
    assert spec.params == params
    assert spec.body_id == body_id


@pytest.mark.parametrize("text", ["blob:2", "cube:x", "random:3,20,seed=abc", "random:3"])
def test_bad_body_specs(text):
    with pytest.raises(BodySpecError):
        resolve_body(text)


def test_named_bodies_resolve():
    assert volume(resolve_body("cube:3")) == pytest.approx(1.0)
    assert volume(resolve_body("cross-polytope:2")) == pytest.approx(2.0)
    assert volume(resolve_body("simplex:2")) == pytest.approx(0.5)


@pytest.mark.parametrize("l", [0.5, 1.0, 2.0**0.5, 2.0])
def test_boxes_are_normalized(l):
    assert is_normalized(box2d(l))


def test_box_rejects_non_positive_side():
    with pytest.raises(BodySpecError):
        box2d(0.0)


def test_parallelogram_is_normalized_and_symmetric():
    body = parallelogram_fhl()
    assert is_normalized(body)
    assert is_symmetric(body)


def test_ngon():
    body = ngon(6)
    assert body.n_vertices == 6
    assert volume(body) == pytest.approx(1.5 * 3**0.5)
    with pytest.raises(BodySpecError):
        ngon(2)


def test_random_bodies_are_reproducible():
    a = gen_random_body(3, 20, seed=7)
    b = gen_random_body(3, 20, seed=7)
    c = gen_random_body(3, 20, seed=8)
    np.testing.assert_array_equal(a.vertices, b.vertices)
    assert a.vertices.shape != c.vertices.shape or not np.array_equal(a.vertices, c.vertices)


def test_random_bodies_are_normalized():
    body = gen_random_body(3, 20, seed=1)
    assert volume(body) == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(barycenter(body), 0.0, atol=1e-9)


def test_random_symmetric_body():
    body = gen_random_body(2, 6, symmetric=True, seed=3)
    assert is_symmetric(body)
    assert is_normalized(body)


def test_random_simplex():
    body = gen_random_body(2, 3, seed=11)
    assert body.n_vertices == 3
    assert volume(body) == pytest.approx(1.0)


def test_too_few_points():
    with pytest.raises(DegenerateInput):
        gen_random_body(3, 3)
    with pytest.raises(DegenerateInput):
        gen_random_body(3, 1, symmetric=True)


def test_random_body_ids():
    assert random_body_id(2, 6, True, 5) == "random:2,6,sym,seed=5"
    assert random_body_id(3, 20, False, 9) == "random:3,20,seed=9"


def test_default_point_counts():
    assert default_point_count(2) == 12
    assert default_point_count(3) == 20


def test_trial_seeds_depend_on_stream_and_index():
    assert trial_seed(42, "lw:3", 0) == trial_seed(42, "lw:3", 0)
    assert trial_seed(42, "lw:3", 0) != trial_seed(42, "lw:3", 1)
    assert trial_seed(42, "lw:3", 0) != trial_seed(42, "meyer:3", 0)
    assert trial_seed(42, "lw:3", 0) != trial_seed(43, "lw:3", 0)


def test_body_files_round_trip(tmp_path):
    body = gen_random_body(3, 20, seed=2)
    path = save_body(body, tmp_path / "bodies" / "k.json")
    loaded = load_body(path)
    np.testing.assert_array_equal(loaded.vertices, body.vertices)
    spec = BodySpec.parse(str(path))
    assert spec.body_id == "k"
    np.testing.assert_array_equal(spec.resolve().vertices, body.vertices)


def test_malformed_body_json(tmp_path):
    with pytest.raises(BodySpecError):
        body_from_json({"dim": 3, "vertices": [[0, 0], [1, 0], [0, 1]]})
    with pytest.raises(BodySpecError):
        body_from_json({"vertices": [[0, 0]]})
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(BodySpecError):
        load_body(path)


def test_body_json_shape(square):
    data = json.loads(json.dumps(square.to_json()))
    assert data["dim"] == 2
    assert len(data["vertices"]) == 4
