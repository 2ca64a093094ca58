import json

import pytest

from flatland.cli import main, parse_problem, run
from flatland.errors import ParseError
from flatland.linalg import Backend
from flatland.scenes import random_instance, two_view_scene
from flatland.serialize import vector_to_json


def _problem(tmp_path, X, Y, name="p.json", **extra):
    data = {"version": "1", "n": len(X), "X": [vector_to_json(p.coords) for p in X],
            "Y": [vector_to_json(p.coords) for p in Y]}
    data.update(extra)
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def _run(*argv):
    code, text = run(list(argv))
    return code, json.loads(text) if text.startswith("{") else text


def test_parse_problem_backends():
    p = parse_problem('{"version": "1", "n": 1, "X": [[1, "1/2", 3]], "Y": [[1, 0, 0]]}')
    assert p.backend is Backend.EXACT
    p = parse_problem('{"version": "1", "n": 1, "X": [[1.5, 2, 3]], "Y": [[1, 0, 0]]}')
    assert p.backend is Backend.FLOAT
    with pytest.raises(ParseError):
        parse_problem('{"version": "1", "n": 1, "X": [[1.5, 2, 3]], "Y": [[1, 0, 0]], "backend": "exact"}')
    with pytest.raises(ParseError):
        parse_problem('{"version": "1", "n": 2, "X": [[1, 2, 3]], "Y": [[1, 0, 0]]}')
    with pytest.raises(ParseError):
        parse_problem('{"version": "1", "n": 1, "X": [[0, 0, 0]], "Y": [[1, 0, 0]]}')


def test_check_and_reconstruct_scene(tmp_path, rng):
    s = two_view_scene(rng, 6)
    path = _problem(tmp_path, s.X, s.Y)
    code, out = _run("check", path, "--seed", "3")
    assert code == 0 and out["result"]["verdict"] == "yes"
    assert out["command"] == "check" and out["seed"] == 3 and out["backend"] == "exact" and out["n"] == 6
    assert "timing" not in out
    code, out = _run("reconstruct", path, "--timing")
    assert code == 0 and out["result"]["residual"] == "0" and "timing" in out


def test_check_n8(tmp_path, rng):
    X, Y = random_instance(rng, 8)
    code, out = _run("check", _problem(tmp_path, X, Y))
    assert code == 0 and out["result"]["verdict"] == "no"
    assert out["result"]["certificate"]["determinant"] != "0"
    code, out = _run("reconstruct", _problem(tmp_path, X, Y))
    assert code == 4 and out["error"]["type"] == "NoCommonImage"


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = _run("check", str(bad))
    assert code == 2 and out["error"]["type"] == "ParseError"
    code, out = _run("check", str(tmp_path / "missing.json"))
    assert code == 2


def test_non_generic(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"version": "1", "n": 4, "X": [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]],
                                "Y": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]}))
    code, out = _run("check", str(path))
    assert code == 3 and out["result"]["verdict"] == "non-generic"
    assert out["genericity"][0]["kind"] == "collinear"


def test_loci_outputs(tmp_path, rng):
    X, Y = random_instance(rng, 4)
    code, out = _run("loci", _problem(tmp_path, X, Y), "--samples", "2")
    assert code == 0 and len(out["result"]["locus"]["e4form"]["coeffs"]) == 36
    assert len(out["result"]["witnesses"]) == 2
    X, Y = random_instance(rng, 6)
    code, out = _run("loci", _problem(tmp_path, X, Y))
    assert [len(out["result"]["locus"][k]["coeffs"]) for k in ("Cx", "Cy")] == [10, 10]
    s = two_view_scene(rng, 7)
    code, out = _run("loci", _problem(tmp_path, s.X, s.Y), "--samples", "3", "--real-only")
    assert code == 0 and len(out["result"]["locus"]["pairs"]) <= 3


def test_map_round_trip_and_base_point(tmp_path, rng):
    X, Y = random_instance(rng, 5)
    path = _problem(tmp_path, X, Y)
    code, out = _run("map", path, "--point=2,-3,5")
    assert code == 0
    b = ",".join(out["result"]["output"])
    code, back = _run("map", path, f"--point={b}", "--inverse")
    assert code == 0 and back["result"]["output"] == out["result"]["input"]
    x2 = ",".join(vector_to_json(X[2].coords))
    code, out = _run("map", path, f"--point={x2}")
    assert code == 5 and out["error"]["base_point"] == 2


def test_plot(tmp_path, rng):
    X, Y = random_instance(rng, 6)
    path = _problem(tmp_path, X, Y)
    code, svg = run(["plot", path, "--window", "-12", "12", "-12", "12", "--size", "200"])
    assert code == 0 and svg.startswith("<svg") and svg.count('class="data"') >= 1
    code, out = _run("plot", path, "--window", "1", "1", "0", "1")
    assert code == 5 and out["error"]["type"] == "EmptyWindow"
    out_file = tmp_path / "pic.svg"
    code, out = _run("plot", path, "--out", str(out_file))
    assert code == 0 and out_file.read_text().startswith("<svg")


def test_determinism(tmp_path, rng):
    X, Y = random_instance(rng, 6)
    path = _problem(tmp_path, X, Y)
    assert run(["loci", path, "--samples", "4"]) == run(["loci", path, "--samples", "4"])
    assert run(["check", path, "--seed", "9"]) == run(["check", path, "--seed", "9"])


def test_main_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    assert main(["check", str(bad)]) == 2
    assert json.loads(capsys.readouterr().out)["error"]["type"] == "ParseError"
