import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from cpn_biharmonic import suites
from cpn_biharmonic.cli import RunConfig, main, run_report
from cpn_biharmonic.report import ResidualReport, load_schema


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize("command", ["verify-algebra", "verify-case3", "verify-curves"])
def test_suite_passes_and_validates(capsys, command):
    code, out = run(capsys, command, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    assert doc["meta"]["command"] == command
    assert all(r["pass"] != r["control"] for r in doc["rows"])


def test_repeated_runs_are_byte_identical(capsys):
    outs = [run(capsys, "verify-case3", "--format", "json", "--seed", "7")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_seed_changes_only_seeded_rows(capsys):
    a = json.loads(run(capsys, "verify-case3", "--format", "json", "--seed", "1")[1])
    b = json.loads(run(capsys, "verify-case3", "--format", "json", "--seed", "2")[1])
    assert a["meta"]["config_hash"] != b["meta"]["config_hash"]
    same = [ra["value"] == rb["value"] for ra, rb in zip(a["rows"], b["rows"]) if ra["name"] != "gauge_invariance_sup"]
    assert all(same)


def test_algebra_report_carries_case_ii_data(capsys):
    doc = json.loads(run(capsys, "verify-algebra", "--format", "json")[1])
    assert doc["data"]["case_ii"]["H2"] == pytest.approx(1.0, abs=1e-12)
    ctrl = [r for r in doc["rows"] if r["control"]]
    assert [r["name"] for r in ctrl] == ["A5_printed_discrepancy"]
    assert not ctrl[0]["pass"]


def test_csv_format(capsys):
    code, out = run(capsys, "verify-algebra", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["name"] == "H2_over_rho_minus_1_3"
    assert set(rows[0]) >= {"name", "value", "tol", "pass", "provenance"}


def test_text_format_and_out_file(tmp_path, capsys):
    path = tmp_path / "r.txt"
    code, out = run(capsys, "verify-algebra", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().rstrip().endswith("overall: OK")


def test_unknown_tolerance_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify-algebra", "--tol", "nonsense=1"])
    assert exc.value.code == 2


def test_torus_requires_rho_4(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify-torus", "--rho", "3"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [["verify-algebra", "--rho", "-1"], ["verify-algebra", "--grid", "0"], ["nope"]])
def test_bad_arguments(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_tightened_tolerance_fails(capsys):
    code, out = run(capsys, "verify-case3", "--tol", "commutativity=1e-300")
    assert code == 1 and "overall: FAILED" in out


def test_tolerance_override_is_recorded(capsys):
    doc = json.loads(run(capsys, "verify-algebra", "--tol", "exact=1e-11", "--format", "json")[1])
    assert doc["meta"]["tolerance_overrides"] == {"exact": 1e-11}
    assert all(r["tol"] == 1e-11 for r in doc["rows"] if r["tol_name"] == "exact")


def test_numeric_failure_exit_code(monkeypatch):
    def boom(report, rho):
        raise FloatingPointError("overflow")

    monkeypatch.setattr(suites, "suite_algebra", boom)
    report, code = run_report(RunConfig("verify-algebra", 3.0))
    assert code == 3
    assert report.rows[-1].name == "internal_error" and not report.rows[-1].passed
    jsonschema.validate(json.loads(report.to_json()), load_schema())


def test_printed_a5_control(capsys):
    code, out = run(capsys, "controls", "--case", "printed-a5")
    assert code == 0
    assert "expected FAIL" in out


def test_report_rejects_unknown_provenance():
    r = ResidualReport()
    with pytest.raises(ValueError):
        r.check("x", 0.0, "exact", "GUESS")
    with pytest.raises(KeyError):
        ResidualReport(tolerances={"bogus": 1.0})


def test_report_nan_is_failure_and_null_in_json():
    r = ResidualReport({"command": "x", "version": "0", "config_hash": "0" * 64})
    r.check("nan", float("nan"), "exact", "DERIVED")
    doc = json.loads(r.to_json())
    assert doc["rows"][0]["value"] is None and not doc["rows"][0]["pass"]
    jsonschema.validate(doc, load_schema())


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "cpn_biharmonic", "verify-algebra", "--format", "json"],
                       capture_output=True, text=True)
    assert p.returncode == 0
    jsonschema.validate(json.loads(p.stdout), load_schema())
