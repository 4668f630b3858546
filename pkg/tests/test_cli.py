import json
import subprocess
import sys
from pathlib import Path

import pytest

from relkill.cli import main

ROOT = Path(__file__).resolve().parent.parent


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def js(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_lambda_and_param_count(capsys):
    code, r = js(capsys, "lambda", "--m", "3", "--d", "2")
    assert code == 0 and r["lambda"] == 20 and r["schema"] == "relkill/1"
    assert r["command"] == ["lambda", "--m", "3", "--d", "2"]
    code, r = js(capsys, "param-count", "--m", "2", "--r", "1", "--s", "1")
    assert (r["n"], r["bound"]) == (3, 9)


def test_bracket_and_cofactor(capsys):
    code, r = js(capsys, "bracket", "--metric", "flat2", "x", "H")
    assert r["bracket"] == "p"
    code, r = js(capsys, "cofactor", "--metric", "ex1", "--k", "2*y*p-x*q")
    assert code == 0 and r["relative_killing"]
    code, r = js(capsys, "cofactor", "--metric", "ex1", "--k", "x*p")
    assert code == 1 and r["reason"] == "not relative-Killing"


def test_is_integral(capsys):
    code, r = js(capsys, "is-integral", "--metric", "ex4", "--p", "p1^2", "--q", "p2")
    assert code == 0 and r["integral"] and r["bidegree"] == [2, 1]
    code, r = js(capsys, "is-integral", "--metric", "ex4", "--p", "p2^2", "--q", "p1")
    assert code == 1
    code, r = js(capsys, "is-integral", "--metric", str(ROOT / "metrics" / "ex1.json"),
                 "--p", "(2*y*p-x*q)*(2*y*p+x*q)/(x^2+4*y^2)")
    assert code == 0


def test_killing_modes(capsys):
    code, r = js(capsys, "killing", "--metric", "ex1", "--degree", "2", "--ansatz", "4")
    assert code == 0 and r["dim"] == 3 and r["lambda_bound"] == 6
    code, r = js(capsys, "killing", "--metric", "ex2", "--degree", "1", "--ansatz", "4")
    assert code == 2 and r["dim"] == 0 and r["status"] == "indeterminate-within-ansatz"
    code, r = js(capsys, "killing", "--metric", "ex1", "--degree", "1", "--ansatz", "4",
                 "--cofactor", "(-3*x*p-6*y*q)/(x^2+4*y^2)^2")
    assert code == 0 and r["dim"] == 2
    code, r = js(capsys, "killing", "--metric", "flat2", "--degree", "1", "--ansatz", "2", "--conformal")
    assert r["dim"] == 6 and len(r["multipliers"]) == 6
    code, r = js(capsys, "killing", "--metric", "ex2", "--degree", "1", "--ansatz", "3",
                 "--denominator-power", "0", "--cofactor=-2*(x+2*y)*(x^2*p+2*y^2*q)/(x^4+4*y^4)^2")
    assert code == 0 and r["dim"] == 1 and r["window"]["power"] == 0


def test_frlin(capsys):
    code, r = js(capsys, "frlin", "--metric", "flat2", "--ansatz", "1")
    assert code == 0 and len(r["integrals"]) == 3
    code, r = js(capsys, "frlin", "--metric", "ex2", "--ansatz", "4")
    assert code == 2 and r["integrals"] == []


def test_surface(capsys):
    code, r = js(capsys, "surface", "classify", "--factor", "4/(1+x^2+y^2)^2")
    assert r["verdict"] == "FiveDimensional" and r["gaussian_curvature"] == "1"
    code, r = js(capsys, "surface", "curvature", "--factor", "1")
    assert r["gaussian_curvature"] == "0"
    code, r = js(capsys, "surface", "gap", "--factor", "1", "--a", "0", "--u=-y", "--v", "x")
    assert code == 0 and r["solves_system"] and r["gap"] == "0"
    code, r = js(capsys, "surface", "gap", "--factor", "1", "--a", "0", "--u", "x", "--v", "x")
    assert code == 1 and not r["solves_system"]


def test_geodesic(capsys):
    code, r = js(capsys, "geodesic", "--metric", "bessel-ex3", "--x0", "0.5,1", "--p0", "1,0.3",
                 "--h", "0.01", "--T", "1", "--watch", "F")
    assert code == 0 and r["watch"][0]["max_drift"] < 1e-6
    code, r = js(capsys, "geodesic", "--metric", "ex1", "--x0", "0.5,1", "--p0", "1,0.3", "--h", "0.01",
                 "--T", "1", "--watch", "(x^2*p+2*y^2*p-x*y*q)/(2*y*p+x*q)")
    assert code == 0 and r["samples"] == 101
    code, r = js(capsys, "geodesic", "--metric", "ex1", "--x0", "0,0", "--p0", "1,0", "--h", "0.01", "--T", "1")
    assert code == 1 and "singular" in r["diagnostic"]


def test_verify_statuses(capsys):
    code, r = js(capsys, "verify", "--example", "ex4")
    assert code == 0 and r["notes"]
    code, r = js(capsys, "verify", "--example", "ex2")
    assert code == 1
    failed = [c["name"] for c in r["checks"] if c["status"] == "fail"]
    assert failed == ["that constant equals the example-1 constant"]


def test_pretty(capsys):
    code, out, _ = run(capsys, "verify", "--example", "sphere", "--pretty")
    assert code == 0 and "[pass] Gaussian curvature is 1" in out
    code2, out2, _ = run(capsys, "--pretty", "verify", "--example", "sphere")
    assert out == out2


@pytest.mark.parametrize(
    "argv, code",
    [
        (["lambda", "--m", "x", "--d", "1"], 64),
        (["lambda", "--m", "0", "--d", "1"], 64),
        (["nosuch"], 64),
        (["killing", "--metric", "ex1", "--degree", "1", "--ansatz", "1", "--cofactor", "p", "--conformal"], 64),
        (["killing", "--metric", "missing.json", "--degree", "1", "--ansatz", "1"], 66),
        (["cofactor", "--metric", "ex1", "--k", "x*+"], 65),
        (["cofactor", "--metric", "ex1", "--k", "0"], 65),
        (["killing", "--metric", "ex1", "--degree", "1", "--ansatz", "1", "--cofactor", "p^2"], 65),
        (["bracket", "--metric", "bessel-ex3", "p", "q"], 64),
        (["geodesic", "--metric", "ex1", "--x0", "1", "--p0", "1,0", "--h", "0.1", "--T", "1"], 64),
    ],
)
def test_error_exit_codes(capsys, argv, code):
    assert main(argv) == code
    err = capsys.readouterr().err
    assert err and "Traceback" not in err


def test_bad_spec_file(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"dim": 2, "coords": ["x", "y"], "inverse_metric": [["1", "x"], ["y", "1"]]}))
    code, _, err = run(capsys, "cofactor", "--metric", str(f), "--k", "p")
    assert code == 65 and "$.inverse_metric[0][1]" in err


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("RELKILL_THREADS", "2")
    assert main(["lambda", "--m", "2", "--d", "1"]) == 0
    monkeypatch.setenv("RELKILL_THREADS", "zero")
    assert main(["lambda", "--m", "2", "--d", "1"]) == 64
    capsys.readouterr()


def test_subprocess_is_byte_identical():
    cmd = [sys.executable, "-m", "relkill.cli", "verify", "--example", "ex1"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=False)
    b = subprocess.run(cmd, capture_output=True, text=True, check=False)
    assert a.returncode == 0
    assert a.stdout == b.stdout and a.stdout
