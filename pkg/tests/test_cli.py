import json
import subprocess
import sys
from pathlib import Path

import pytest

from stabcut.cli import main
from stabcut.fixtures import cross, l_shape
from stabcut.gadgets import forcer

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, poly in (("l1", l_shape()), ("cross", cross()), ("f0", forcer().polygon)):
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(json.dumps(poly.to_json()))
    paths["part"] = tmp_path / "part.json"
    paths["part"].write_text(json.dumps({"segments": [{"apex": [1, 1], "dir": "H"}]}))
    paths["dir"] = tmp_path
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_validate(capsys, files, tmp_path):
    assert run(capsys, "validate", files["l1"])[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"outer": [[0, 0], [2, 0], [2, 2], [1, 2], [1, -1], [0, -1]]}))
    code, out, _ = run(capsys, "validate", bad)
    assert code == 1 and not out["ok"]


def test_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "cstab2", tmp_path / "missing.json")
    assert code == 2 and "cannot read" in json.loads(err)["error"]
    junk = tmp_path / "junk.json"
    junk.write_text("{")
    assert run(capsys, "pixelate", junk)[0] == 2
    assert run(capsys, "no-such-command")[0] == 2


def test_pixelate_and_eval(capsys, files):
    code, out, _ = run(capsys, "pixelate", files["l1"], "--stats")
    assert code == 0 and out["pixels"] == 3 and "pixel_rects" not in out
    code, out, _ = run(capsys, "eval", files["l1"], "--partition", files["part"])
    assert code == 0 and out["stabbing"]["value"] == 2 and out["minimal"]


def test_cstab2(capsys, files, tmp_path):
    wit = tmp_path / "w.json"
    code, out, _ = run(capsys, "cstab2", files["l1"], "--emit-witness", wit, "--trace")
    assert code == 0 and out["answer"] == "yes" and json.loads(wit.read_text()) == out["witness"]
    assert run(capsys, "cstab2", files["cross"], "--method", "sat")[0] == 1


def test_exact(capsys, files):
    assert run(capsys, "exact", files["f0"], "--k", 4)[0] == 0
    assert run(capsys, "exact", files["f0"], "--k", 3)[0] == 1
    code, out, _ = run(capsys, "exact", files["cross"])
    assert code == 0 and out["stabbing_number"] == 3
    code, out, _ = run(capsys, "exact", files["f0"], "--budget", 3)
    assert code == 3 and out["error"] == "budget exceeded"
    code, out, _ = run(capsys, "exact", files["f0"], "--k", 4, "--enumerate-minimal")
    assert out["count"] == 8


def test_dp_and_gatefree(capsys, files, tmp_path):
    td = tmp_path / "td.json"
    code, out, _ = run(capsys, "dp", files["cross"], "--k", 3, "--td-out", td)
    assert code == 0 and json.loads(td.read_text())["width"] == out["width"]
    assert run(capsys, "dp", files["cross"], "--k", 2)[0] == 1
    assert run(capsys, "dp", files["cross"], "--k", 3, "--max-states", 2)[0] == 3
    code, out, _ = run(capsys, "gatefree", files["l1"], "--k", 2)
    assert code == 0 and out["cutoff"] == 25
    assert run(capsys, "gatefree", files["cross"], "--k", 2)[0] == 2


def test_render_golden(capsys, files, tmp_path):
    svg = tmp_path / "out.svg"
    assert run(capsys, "render", files["l1"], "--svg", svg, "--partition", files["part"], "--witness-stab")[0] == 0
    assert svg.read_text() == (GOLDEN / "l1_h.svg").read_text()


def test_gen(capsys, tmp_path):
    a = tmp_path / "a.json"
    a.write_text(json.dumps({"x": 1}))
    code, out, _ = run(capsys, "gen", "--rpm", "example", "--out", tmp_path / "p.json", "--witness", "/dev/null")
    assert code == 2
    rpm = tmp_path / "rpm.json"
    rpm.write_text(json.dumps({"variables": [{"name": "x", "rect": [0, -1, 10, 1]}], "clauses": [
        {"sign": "+", "rect": [0, 3, 10, 5], "literals": [{"var": "x", "column": c} for c in (1, 4, 7)]}]}))
    code, out, _ = run(capsys, "gen", "--rpm", rpm, "--witness", a)
    assert code == 0 and out["witness_stabbing"] <= 4
    code, out, _ = run(capsys, "gen", "--family", "staircase", "--count", 3, "--seed", 2)
    assert code == 0 and len(out["polygons"]) == 3
    assert run(capsys, "gen")[0] == 2


def test_crossval_is_deterministic(capsys):
    code, a, _ = run(capsys, "crossval", "--count", 40, "--seed", 3)
    _, b, _ = run(capsys, "crossval", "--count", 40, "--seed", 3)
    assert code == 0 and a == b and a["disagreements"] == []


def test_rayshoot_fuzz_and_fixtures(capsys, tmp_path):
    code, out, _ = run(capsys, "rayshoot-fuzz", "--ops", 2000, "--seed", 4)
    assert code == 0 and out["mismatches"] == 0
    code, out, _ = run(capsys, "fixtures", "--out-dir", tmp_path / "fx")
    assert code == 0 and len(out["written"]) == 8


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "stabcut", "cstab2", str(files["cross"])], capture_output=True, text=True)
    assert res.returncode == 1 and json.loads(res.stdout)["answer"] == "no"
