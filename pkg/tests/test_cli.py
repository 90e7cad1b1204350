import json
import math

import pytest

from hardylamb.cli import run
from hardylamb.statements import InequalityReport


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_const_anchor(capsys):
    code, out, _ = call(capsys, "const", "--nu", "1", "--m", "1", "--lambda", "0.5")
    data = json.loads(out)
    assert code == 0 and round(2 * data["c"], 4) == 1.8412
    assert set(data) >= {"c", "z", "residual", "method", "bracket"}


def test_const_trig_case(capsys):
    code, out, _ = call(capsys, "const", "--nu", "0.5", "--m", "2", "--lambda", "0")
    assert abs(json.loads(out)["c"] - math.pi / 2) < 1e-10


@pytest.mark.parametrize("method", ["bisect", "ode"])
def test_const_methods(capsys, method):
    code, out, _ = call(capsys, "const", "--nu", "0.3", "--m", "1.2", "--lambda", "0.1", "--method", method)
    assert code == 0 and json.loads(out)["method"] in ("bisect-newton", "ode-continuation")


def test_verify_example_and_witness(capsys):
    code, out, _ = call(capsys, "verify", "--statement", "EX3S", "--fn", "powerbump:2,1", "--segment", "-1,1")
    assert code == 0 and json.loads(out)["verdict"] == "holds"
    code, out, _ = call(capsys, "verify", "--statement", "EX3S", "--fn", "powerbump:2,0", "--segment", "-1,1")
    assert code == 0 and abs(json.loads(out)["margin"]) < 1e-8


def test_verify_json_round_trip(capsys):
    code, out, _ = call(capsys, "verify", "--statement", "T6A", "--nu", "0.3", "--m", "2", "--lambda", "0.2",
                        "--p", "2.5", "--fn", "sinepower:2", "--domain", "box:2x1x1")
    assert code == 0
    report = InequalityReport.from_dict(json.loads(out))
    assert report.to_json() + "\n" == out


def test_verify_inadmissible_exits_2(capsys):
    code, out, err = call(capsys, "verify", "--statement", "EX3S", "--fn", "powerbump:1,2", "--segment", "0,1",
                          "--embed", "affine")
    assert code == 2 and json.loads(out)["verdict"] == "inadmissible"
    assert json.loads(err)["error"] == "inadmissible"


def test_verify_comparison(capsys):
    code, out, _ = call(capsys, "verify", "--statement", "COR5", "--nu", "0.25", "--m", "2", "--lambda", "0.72")
    assert code == 0 and json.loads(out)["holds"]


@pytest.mark.parametrize("argv,kind", [
    (["const", "--nu", "1", "--m", "1", "--lambda", "2"], "invalid-params"),
    (["verify", "--statement", "NOPE", "--fn", "zero"], "invalid-input"),
    (["verify", "--statement", "T1A", "--nu", "0.5", "--m", "1", "--lambda", "0.1", "--fn", "wave:1"], "invalid-input"),
    (["const", "--nu", "1"], "invalid-input"),
    (["frobnicate"], "invalid-input"),
])
def test_errors_are_json_on_stderr(capsys, argv, kind):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == kind


def test_unknown_family_lists_valid_names(capsys):
    _, _, err = call(capsys, "verify", "--statement", "L3A", "--nu", "0.5", "--m", "1", "--lambda", "0.1",
                     "--fn", "wave:1")
    assert "powerbump" in json.loads(err)["message"]


def test_table(capsys):
    code, out, _ = call(capsys, "table", "--nu-range", "0,1", "--m-range", "1,1", "--lambda-range", "0,2",
                        "--steps", "2")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "nu,m,lambda,c,z,residual,method" and len(lines) == 9
    assert lines[2].endswith("invalid-params")


def test_identities(capsys):
    code, out, _ = call(capsys, "identities", "--which", "recurrence", "--format", "json")
    assert code == 0 and json.loads(out)[0]["passed"]


def test_domains(capsys):
    code, out, _ = call(capsys, "domains", "--domain", "ball:3,1", "--samples", "20000")
    data = json.loads(out)
    assert code == 0 and data["passed"] and abs(data["relative_error"]) < 1e-8


def test_sweep_is_byte_identical(tmp_path, capsys):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([{"nu": [0.5, 1], "m": 1, "lambda": [0, 0.3]}]))
    outs = []
    for _ in range(2):
        code, out, _ = call(capsys, "sweep", "--statement", "T1A", "--grid", str(grid))
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] and outs[0].startswith("statement,nu,m,lambda")


def test_output_file_and_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HARDYLAMB_TOL", "1e-9,1e-7")
    monkeypatch.setenv("HARDYLAMB_SEED", "5")
    target = tmp_path / "out.json"
    code, out, _ = call(capsys, "const", "--nu", "1", "--m", "1", "--lambda", "0", "-o", str(target))
    assert code == 0 and out == "" and json.loads(target.read_text())["c"] > 0
    monkeypatch.setenv("HARDYLAMB_TOL", "oops")
    code, _, err = call(capsys, "const", "--nu", "1", "--m", "1", "--lambda", "0")
    assert code == 2 and "HARDYLAMB_TOL" in err


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
