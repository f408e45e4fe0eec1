import json
import os
import subprocess
import sys

import pytest

from pfaffkit import __version__
from pfaffkit.cli import canonical_json, main, run

SESSION = """vars x, y;
field X = [x, 2*y];
system V = {1, x, y};
foliation F = {X};
form w = y dx + x dy;
"""


def call(*argv):
    code, text, _ = run(list(argv))
    return code, json.loads(text), text


@pytest.fixture
def session_file(tmp_path):
    p = tmp_path / "demo.pfk"
    p.write_text(SESSION, encoding="utf-8")
    return str(p)


def test_extactic_example(session_file):
    code, rep, _ = call("extactic", "--input", session_file, "--foliation", "F", "--system", "V")
    assert code == 0 and rep["status"] == "ok"
    assert rep["payload"]["extactic"] == "2*x*y"
    assert rep["payload"]["k"] == "3"


def test_extactic_with_sieve(session_file):
    code, rep, _ = call(
        "extactic", "--input", session_file, "--foliation", "F", "--system", "V", "--candidate", "x", "--candidate", "x + y"
    )
    sieve = {e["candidate"]: e for e in rep["payload"]["sieve"]}
    assert sieve["x"]["divides"] is True and sieve["x"]["multiplicity"] == "1"
    assert sieve["x + y"]["divides"] is False


def test_bounds_example():
    code, rep, _ = call("bounds", "--formula", "jpaa", "--n", "2", "--r", "1", "--d", "2")
    assert code == 0 and rep["payload"]["value"] == "5"
    code, rep, _ = call("bounds", "--formula", "prop11", "--n", "2", "--nu", "1", "--degrees", "2", "--count", "6")
    assert rep["payload"]["value"] == "6" and rep["payload"]["verdict"] == "below_bound"


def test_first_integral_example_and_refusal():
    code, rep, _ = call("first-integral", "--foliation", "{radial}", "--system", "{x, y}")
    assert code == 0 and rep["status"] == "ok"
    assert [c["value"] for c in rep["payload"]["candidates"]] == ["-y/x"]
    code, rep, _ = call("first-integral", "--foliation", "{[x, 2*y]}", "--system", "{1, x, y}")
    assert code == 2 and rep["status"] == "refused" and rep["payload"]["result"] == "full rank"


def test_check_invariant(session_file):
    code, rep, _ = call("check-invariant", "--input", session_file, "--foliation", "F", "--poly", "x", "--poly", "y")
    assert code == 0
    assert [c["cofactors"] for c in rep["payload"]["certificates"]] == [["1"], ["2"]]
    code, rep, _ = call("check-invariant", "--input", session_file, "--foliation", "F", "--poly", "x + y")
    assert code == 2 and rep["payload"]["refusals"][0]["f"] == "x + y"
    code, rep, _ = call("check-invariant", "--input", session_file, "--form", "w", "--poly", "x")
    assert code == 0 and rep["payload"]["certificates"][0]["mode"] == "pfaff_form"


def test_log_certificate(session_file):
    code, rep, _ = call("log-certificate", "--input", session_file, "--form", "w", "--invariant", "x", "--invariant", "y")
    assert code == 0
    assert rep["payload"]["lambda_basis"] == [["1", "1"]]
    assert rep["payload"]["first_integrals"] == ["x*y"]
    code, rep, _ = call("log-certificate", "--input", session_file, "--form", "w", "--invariant", "x + 1")
    assert code == 2


def test_census():
    code, rep, _ = call("census", "--foliation", "{[x, 2*y]}", "--degree", "1", "--prime", "5")
    assert code == 0
    assert [m["f"] for m in rep["payload"]["members"]] == ["x", "y"]
    assert rep["payload"]["candidates"] == "30"
    code, rep, _ = call("census", "--foliation", "{[x, 2*y]}", "--degree", "3", "--prime", "7", "--cap", "100")
    assert code == 1 and rep["error"]["code"] == "cap_exceeded"


def test_degree():
    code, rep, _ = call("degree", "--vars", "x0,x1,x2", "--form", "x1*x2 dx0 + x0*x2 dx1 - 2*x0*x1 dx2")
    assert code == 0 and rep["payload"]["degree"] == "1" and rep["payload"]["tangency_degree"] == "1"
    code, rep, _ = call("degree", "--vars", "x,y,z", "--form", "x dx + y dy + z dz")
    assert code == 1 and rep["error"]["code"] == "not_projective"


def test_verify():
    code, rep, _ = call("verify", "--foliation", "{radial}", "--vars", "x,y", "--function", "y/x")
    assert code == 0 and rep["payload"]["verified"] is True
    code, rep, _ = call("verify", "--foliation", "{[x, 2*y]}", "--function", "y/x")
    assert code == 2 and rep["payload"]["verified"] is False
    code, rep, _ = call("verify", "--form", "y dx - x dy", "--function", "x/y")
    assert code == 0


def test_errors_are_reported_with_codes():
    code, rep, _ = call("extactic", "--source", "vars x,y; field X = [x, y", "--foliation", "X", "--system", "{x}")
    assert code == 1 and rep["status"] == "error"
    assert rep["error"]["code"] == "parse_error" and "line" in rep["error"]
    code, rep, _ = call("bogus")
    assert code == 1 and rep["error"]["code"] == "usage"
    code, rep, _ = call()
    assert code == 1
    code, rep, _ = call("bounds", "--formula", "jpaa", "--n", "2")
    assert code == 1 and rep["error"]["code"] == "invalid_argument"
    code, rep, _ = call("extactic", "--foliation", "{radial}")
    assert code == 1 and rep["error"]["code"] == "usage"


def test_report_shape():
    code, rep, text = call("bounds", "--formula", "jpaa", "--n", "2", "--r", "1", "--d", "2", "--seed", "7")
    assert rep["schema"] == 1 and rep["tool"] == "pfaffkit" and rep["version"] == __version__
    assert rep["seed"] == "7" and rep["command"] == "bounds"
    assert text == canonical_json(rep)
    assert list(rep) == sorted(rep)


def test_reports_are_byte_identical(session_file):
    argv = ["extactic", "--input", session_file, "--foliation", "F", "--system", "V", "--seed", "3"]
    assert run(argv)[1] == run(argv)[1]
    argv = ["census", "--foliation", "{[x, 2*y]}", "--degree", "1", "--prime", "7"]
    assert run(argv)[1] == run(argv)[1]


def test_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["bounds", "--formula", "jpaa", "--n", "2", "--r", "1", "--d", "2", "--out", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["payload"]["value"] == "5"


def _subprocess(*argv, env=None):
    return subprocess.run([sys.executable, "-m", "pfaffkit", *argv], capture_output=True, text=True, env=env)


def test_exit_codes_from_a_real_process():
    ok = _subprocess("first-integral", "--foliation", "{radial}", "--system", "{x, y}")
    assert ok.returncode == 0 and json.loads(ok.stdout)["status"] == "ok"
    refused = _subprocess("first-integral", "--foliation", "{[x, 2*y]}", "--system", "{1, x, y}")
    assert refused.returncode == 2
    bad = _subprocess("census", "--foliation", "{radial}", "--degree", "1")
    assert bad.returncode == 1


def test_thread_setting_keeps_reports_identical():
    argv = ["census", "--foliation", "{[x, 2*y]}", "--degree", "1", "--prime", "7"]
    env = dict(os.environ, PFAFFKIT_THREADS="2")
    a = _subprocess(*argv, env=env)
    b = _subprocess(*argv)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
