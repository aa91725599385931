import csv
import hashlib
import json

import numpy as np
import pytest

from t2fde import checks, cli
from t2fde.t1 import AlphaGrid
from t2fde.t2 import BetaGrid, from_triangular_qt2
from conftest import FIVE


def run(*argv):
    return cli.main([str(a) for a in argv])


def read(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def p1(tmp_path):
    base = tmp_path / "p1"
    assert run("solve", "bundled:problem1", "--out", base) == 0
    return base


def test_csv_layout(p1):
    raw = p1.with_suffix(".csv").read_bytes()
    assert b"\r" not in raw
    header = raw.split(b"\n", 1)[0].decode()
    assert header == ",".join(cli.COLUMNS)
    rows = read(p1.with_suffix(".csv"))
    assert {r["form"] for r in rows} == {"11", "12", "21", "22"}
    assert len(rows) == 4 * 21 * 21 * 31


def test_initial_rows_reproduce_five(p1):
    rows = [r for r in read(p1.with_suffix(".csv")) if r["form"] == "11" and float(r["x"]) == 0.0]
    ref = from_triangular_qt2(FIVE, AlphaGrid(31), BetaGrid(21))
    worst = 0.0
    for r in rows:
        a, b = float(r["alpha"]), float(r["beta"])
        expect = ref.data[:, round(b * 20), round(a * 30)].reshape(4)
        got = [float(r[c]) for c in cli.COLUMNS[3:7]]
        worst = max(worst, np.max(np.abs(np.array(got) - expect)))
    assert worst <= 1e-11


def test_twelve_significant_digits(p1):
    row = read(p1.with_suffix(".csv"))[40]
    digits = row["upper_right"].replace(".", "").replace("-", "").lstrip("0")
    assert len(digits) <= 12


def test_repeat_runs_byte_identical(p1, tmp_path):
    assert run("solve", "bundled:problem1", "--out", tmp_path / "again") == 0
    assert (tmp_path / "again.csv").read_bytes() == p1.with_suffix(".csv").read_bytes()
    assert (tmp_path / "again.json").read_bytes() == p1.with_suffix(".json").read_bytes()


def test_json_and_csv_hold_identical_numbers(p1):
    doc = json.loads(p1.with_suffix(".json").read_text())
    forms = doc["forms"]
    for r in read(p1.with_suffix(".csv"))[::97]:
        entry = forms[r["form"]]
        ib = entry["beta"].index(float(r["beta"]))
        ia = entry["alpha"].index(float(r["alpha"]))
        x = entry["x"][r["x"]]
        got = [*x["lower"][ib][ia], *x["upper"][ib][ia]]
        assert got == [float(r[c]) for c in cli.COLUMNS[3:7]]
        assert entry["valid"] == (r["valid"] == "true")


def test_hminus_spec_gives_problem2(tmp_path, capsys):
    spec = tmp_path / "p2.toml"
    spec.write_text(
        '[equation]\na = { mode = "plus", k = 0 }\nb = { mode = "hminus", k = 1 }\n'
        "[init]\ny0 = [3.5, 4, 4.5, 5, 5.5, 6, 6.5]\ndy0 = [-0.5, 0, 0.5, 1, 1.5, 2, 2.5]\n"
        '[grid]\nalpha_count = 4\nbeta_count = 3\n[solve]\nform = "11"\n'
    )
    assert run("solve", spec, "--out", tmp_path / "out") == 0
    rows = read(tmp_path / "out.csv")
    crisp = [r for r in rows if r["alpha"] == "1" and r["beta"] == "1"]
    for r in crisp:
        x = float(r["x"])
        assert float(r["lower_left"]) == pytest.approx(2 * np.exp(-x) + 3 * np.exp(x), abs=1e-9)
    assert "form 11 [rk4]: admissible" in capsys.readouterr().out


def test_parse_error_exit_code(tmp_path, capsys):
    spec = tmp_path / "bad.toml"
    spec.write_text(
        '[equation]\na = { mode = "plus", k = 0 }\nb = { mode = "plus", k = 0 }\n'
        "[init]\ny0 = [3.5, 4, 4.5, 5, 5.5, 6, 6.5]\ndy0 = [0, 1, 0.5, 2, 3, 4, 5]\n"
    )
    assert run("solve", spec) == cli.EXIT_PARSE
    assert "line 6, column 1" in capsys.readouterr().err


def test_missing_file_exit_code(tmp_path):
    assert run("solve", tmp_path / "nope.toml") == cli.EXIT_PARSE


def test_no_admissible_form_exit_code(tmp_path):
    assert run("solve", "bundled:problem1", "--form", "22", "--out", tmp_path / "x") == cli.EXIT_NONE_ADMISSIBLE
    assert {r["valid"] for r in read(tmp_path / "x.csv")} == {"false"}


def test_integration_failure_exit_code(tmp_path):
    spec = tmp_path / "stiff.toml"
    spec.write_text(
        '[equation]\na = { mode = "plus", k = 2000 }\nb = { mode = "plus", k = 0 }\n'
        "[init]\ny0 = [3.5, 4, 4.5, 5, 5.5, 6, 6.5]\ndy0 = [-0.5, 0, 0.5, 1, 1.5, 2, 2.5]\n"
        "[grid]\nalpha_count = 3\nbeta_count = 2\n[solve]\ndx = 0.01\n"
    )
    assert run("solve", spec, "--out", tmp_path / "s") == cli.EXIT_INTEGRATION


def test_closed_backend_flag(tmp_path, capsys):
    assert run("solve", "bundled:problem2", "--backend", "closed", "--out", tmp_path / "c") == 0
    out = capsys.readouterr().out
    assert "form 11 [closed_form]" in out and "form 12 [rk4]" in out


def test_check_count_zero(capsys):
    assert run("check", "t1", "--count", "0") == 0


def test_check_calculus_suite_passes():
    assert run("check", "calculus", "--seed", "1", "--count", "100") == 0


def test_check_failure_exit_code(monkeypatch):
    bad = checks.PropertyResult("forced", 0.0)
    bad.fail("forced failure")
    monkeypatch.setattr(checks, "run_suite", lambda *a, **k: [bad])
    assert run("check", "t2") == cli.EXIT_CHECK_FAILED


def test_plot(p1, tmp_path):
    csv_path = p1.with_suffix(".csv")
    before = hashlib.sha256(csv_path.read_bytes()).hexdigest()
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert run("plot", csv_path, "--alpha", "1/3", "--beta", "0.5", "--out", a) == 0
    assert run("plot", csv_path, "--alpha", "1/3", "--beta", "0.5", "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    assert hashlib.sha256(csv_path.read_bytes()).hexdigest() == before
    svg = a.read_text()
    for label in ("lower plane, left", "lower plane, right", "upper plane, left", "upper plane, right",
                  "crisp (alpha = beta = 1)", "value"):
        assert label in svg


def test_plot_off_grid(p1, tmp_path):
    assert run("plot", p1.with_suffix(".csv"), "--alpha", "0.31", "--beta", "0.5", "--out", tmp_path / "x.svg") == 1


def test_plot_unknown_form(p1, tmp_path):
    path = p1.with_suffix(".csv")
    rows = path.read_text().splitlines()
    path.write_text("\n".join(r for r in rows if not r.endswith(",12,true")) + "\n")
    assert run("plot", path, "--alpha", "1", "--beta", "1", "--form", "12", "--out", tmp_path / "x.svg") == 1


def test_plot_crisp_point(p1, tmp_path):
    assert run("plot", p1.with_suffix(".csv"), "--alpha", "1", "--beta", "1", "--out", tmp_path / "c.svg") == 0
