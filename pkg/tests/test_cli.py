"""Tests for the command line front end."""
import json

import pytest

from monoforge.cli import EXIT_ERROR, EXIT_FAILED, EXIT_OK, main, version
from monoforge.diagnostics import REDACTED


def _germ_file(tmp_path, u, v, exceptional="x", base=1, name="g.germ"):
    path = tmp_path / name
    path.write_text(f"vars: x, y, z\nexceptional: {exceptional}\nbase: {base}\nu: {u}\nv: {v}\n",
                    encoding="utf-8")
    return path


def _run(capsys, argv):
    status = main([str(a) for a in argv])
    return status, json.loads(capsys.readouterr().out)


def test_classify_prepared(tmp_path, capsys):
    """The prepared tag and reduced P of a bad 1 point."""
    path = _germ_file(tmp_path, "x^3", "x^2 + x^5*y")
    status, record = _run(capsys, ["classify-prepared", "--germ", path])
    assert status == EXIT_OK
    assert record["tag"] == "prepared-1pt"
    assert record["exponents"] == {"a": 3, "b": 5}
    assert record["P"] == {"2": 1}


def test_classify_prepared_failure(tmp_path, capsys):
    """A germ matching no form exits with the failure status."""
    path = _germ_file(tmp_path, "x*y", "z^2 + x*z", exceptional="x, y")
    status, record = _run(capsys, ["classify-prepared", "--germ", path])
    assert status == EXIT_FAILED
    assert record["tag"] == "not-prepared"


def test_invertible(tmp_path, capsys):
    """u = x^5, v = x^2 y is not principal."""
    path = _germ_file(tmp_path, "x^5", "x^2*y")
    status, record = _run(capsys, ["invertible", "--germ", path])
    assert status == EXIT_OK
    assert record == {"invertible": False, "case": "1pt: v=x^c y, c<k"}


def test_good_bad(tmp_path, capsys):
    """Prepared, good and toroidal records stay apart."""
    path = _germ_file(tmp_path, "x^2", "y")
    status, record = _run(capsys, ["good-bad", "--germ", path])
    assert status == EXIT_OK
    assert record["prepared"]["tag"] == "prepared-1pt"
    assert record["good"]["good"] is True
    assert record["toroidal"] == {"toroidal": True, "tag": "u=x^a, v=y"}


def test_invariants_aci(tmp_path, capsys):
    """A and C per divisor; I is not defined at a bad point."""
    path = _germ_file(tmp_path, "x^3", "x^2 + x^5*y")
    status, record = _run(capsys, ["invariants-ACI", "--germ", path])
    assert status == EXIT_OK
    assert record["divisors"]["x"] == {"A": 3, "C": [3, 5], "nu": 2}
    assert record["I"] == "not-applicable"


def test_missing_germ(capsys):
    """Germ commands need --germ."""
    status, record = _run(capsys, ["invertible"])
    assert status == EXIT_ERROR
    assert record["error"] == "MalformedGerm"


def test_malformed_file(tmp_path, capsys):
    """Unparseable series end in an error record."""
    path = _germ_file(tmp_path, "x^3", "x y")
    status, record = _run(capsys, ["classify", "--germ", path])
    assert status == EXIT_ERROR
    assert record["error"] == "MalformedGerm"


def test_curve_blowup_needs_r(tmp_path, capsys):
    """A curve center is checked against an asserted r."""
    path = _germ_file(tmp_path, "x^5", "x^2*y")
    status, record = _run(capsys, ["blowup", "--germ", path, "--center", "x,y"])
    assert status == EXIT_ERROR
    assert record["error"] == "MalformedGerm"


def test_json_output_file(tmp_path, capsys):
    """--json writes the record instead of printing it."""
    path = _germ_file(tmp_path, "x^5", "x^2*y")
    out = tmp_path / "out" / "record.json"
    assert main(["invertible", "--germ", str(path), "--json", str(out)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text(encoding="utf-8"))["invertible"] is False


def test_monomialize_with_diagnostics(tmp_path, capsys):
    """Forest commands record the trace and a redacted diagnostics dump."""
    path = _germ_file(tmp_path, "x^3", "x^2 + x^5*y")
    dump = tmp_path / "diagnostics.json"
    status, record = _run(capsys, ["monomialize", "--germ", path, "--diagnostics", dump])
    assert status == EXIT_OK
    assert [s["target"] for s in record["steps"]] == ["q0", "q0.v", "q0.v.u"]
    assert record["final"]["A"] == 0
    diagnostics = json.loads(dump.read_text(encoding="utf-8"))
    assert diagnostics["monoforge"]["options"]["germ_file"] == REDACTED
    assert diagnostics["coordinator"]["leaves"] == 1
    assert diagnostics["error"] is None


def test_failed_run_writes_diagnostics(tmp_path, capsys):
    """A failed forest run still leaves its diagnostics behind."""
    path = _germ_file(tmp_path, "x^3", "x^2 + x^5*y")
    dump = tmp_path / "diagnostics.json"
    status, record = _run(capsys, ["toroidalize", "--germ", path, "--diagnostics", dump])
    assert status == EXIT_ERROR
    assert record["error"] == "WrongForm"
    assert json.loads(dump.read_text(encoding="utf-8"))["error"]["error"] == "WrongForm"


def test_version(capsys):
    """--version prints the manifest version."""
    with pytest.raises(SystemExit) as err:
        main(["--version"])
    assert err.value.code == 0
    assert version() in capsys.readouterr().out
