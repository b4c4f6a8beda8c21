import json
import math

import pytest

from lwlab.cli import build_parser, main


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_gen_and_isotropy(tmp_path, capsys):
    path = tmp_path / "square.json"
    assert main(["gen", "--shape", "cube:2", "--out", str(path)]) == 0
    assert path.is_file()
    capsys.readouterr()
    assert main(["isotropy", str(path)]) == 0
    payload = _json_out(capsys)
    assert payload["dim"] == 2
    assert payload["L"] == pytest.approx(1.0 / math.sqrt(12.0))
    axes = payload["principal_axes"]
    assert axes[0] == pytest.approx([1.0, 0.0], abs=1e-9)
    assert axes[1] == pytest.approx([0.0, 1.0], abs=1e-9)


def test_gen_to_stdout(capsys):
    assert main(["gen", "--shape", "random:3,20,seed=7", "--normalize"]) == 0
    payload = _json_out(capsys)
    assert payload["dim"] == 3
    assert len(payload["vertices"]) >= 4


def test_zp_support(capsys):
    assert main(["zp", "cube:3", "--p", "2", "--dir", "1,0,0"]) == 0
    assert _json_out(capsys)["support"] == pytest.approx(1.0 / math.sqrt(12.0))


def test_lambda_scan(capsys):
    assert main(["lambda", "box2d:2", "--method", "scan"]) == 0
    payload = _json_out(capsys)
    assert payload["method"] == "scan"
    assert payload["value"] == pytest.approx(16.0 / 17.0, abs=1e-6)


def test_lambda_with_cover(tmp_path, capsys):
    cover = tmp_path / "trivial.json"
    cover.write_text(json.dumps({"sets": [[1, 2, 3]], "weights": [1.0]}), encoding="utf-8")
    assert main(["lambda", "cube:3", "--cover", str(cover), "--restarts", "1"]) == 0
    assert _json_out(capsys)["value"] == pytest.approx(1.0)


def test_pistar_volume(capsys):
    assert main(["pistar", "cube:2", "--volume"]) == 0
    assert _json_out(capsys)["volume"] == pytest.approx(2.0, rel=1e-9)


def test_pistar_volume_flag_adds_the_full_volume_to_a_section(capsys):
    assert main(["pistar", "cube:3"]) == 0
    full = _json_out(capsys)["volume"]
    assert main(["pistar", "cube:3", "--section", "e1,e2"]) == 0
    assert "full_volume" not in _json_out(capsys)
    assert main(["pistar", "cube:3", "--section", "e1,e2", "--volume"]) == 0
    payload = _json_out(capsys)
    assert payload["d"] == 2
    assert payload["full_volume"] == pytest.approx(full, rel=1e-12)


def test_paouris(capsys):
    assert main(["paouris", "cube:3", "--subspace", "e1,e2"]) == 0
    assert _json_out(capsys)["product"] == pytest.approx(math.sqrt(math.pi / 12.0), rel=1e-2)


def test_verify_writes_csv(tmp_path, capsys):
    out = tmp_path / "planar.csv"
    code = main(
        ["verify", "--suite", "planar", "--dim", "2", "--trials", "1", "--out", str(out),
         "--log-dir", str(tmp_path / "logs")]
    )
    assert code == 0
    assert out.read_text(encoding="utf-8").startswith("check_id,body_id,dim,")
    summary = _json_out(capsys)
    assert summary["suite"] == "planar"
    assert summary["fail"] == 0


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["gen", "--shape", "blob:2"],
        ["lambda", "cube:3", "--method", "scan"],
        ["zp", "cube:3", "--dir", "1,0"],
        ["paouris", "cube:3", "--subspace", "e1,e9"],
        ["isotropy", "missing.json"],
        ["verify", "--suite", "planar", "--dim", "9"],
    ],
)
def test_usage_errors_exit_with_two(argv, capsys):
    assert main(argv) == 2


def test_unknown_suite_is_rejected_by_argparse():
    with pytest.raises(SystemExit) as excinfo:
        build_parser().parse_args(["verify", "--suite", "nope"])
    assert excinfo.value.code == 2
