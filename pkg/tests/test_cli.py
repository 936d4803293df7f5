import csv
import json
import subprocess
import sys

import pytest

from hypermonogenic.cli import Report, build_parser, run


def run_json(capsys, *argv):
    rc = run(list(argv))
    out = capsys.readouterr().out
    return rc, json.loads(out)


def test_algebra_check(capsys):
    rc, doc = run_json(capsys, "algebra-check", "--n", "3", "--cases", "20", "--seed", "1")
    assert rc == 0 and doc["passed"]
    assert doc["command"] == "algebra-check"
    assert all(c["passed"] for c in doc["checks"])


def test_mobius_and_bessel(capsys):
    assert run_json(capsys, "mobius-check", "--cases", "20")[0] == 0
    assert run_json(capsys, "bessel-check", "--cases", "10")[0] == 0


def test_pde_residual(capsys):
    rc, doc = run_json(capsys, "pde-residual", "--n", "3", "--k", "-2", "--points", "3")
    assert rc == 0
    names = {c["name"] for c in doc["checks"]}
    assert any("khyper" in name for name in names)


def test_eisenstein_identity_only(capsys):
    rc, doc = run_json(capsys, "eisenstein", "--n", "3", "--p", "2", "--k", "-2", "--N", "3",
                       "--B", "1", "--x", "0.1,0.2,0.3,1")
    assert rc == 0
    row = doc["rows"][0]
    assert row["terms_used"] == 1 and row["value"] == "1.0"


def test_eisenstein_csv_and_gnuplot(tmp_path, capsys):
    out, gp = tmp_path / "e.csv", tmp_path / "e.gp"
    rc = run(["eisenstein", "--n", "3", "--p", "2", "--k", "-2", "--B", "50", "--grid", "1:4:4",
              "--format", "csv", "--out", str(out), "--gnuplot", str(gp)])
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 4
    assert [float(r["x_n"]) for r in rows] == [1.0, 2.0, 3.0, 4.0]
    assert "plot" in gp.read_text() and str(out) in gp.read_text()
    assert "PASS" in capsys.readouterr().out


def test_divergent_config_exit_code(capsys):
    assert run(["eisenstein", "--n", "3", "--p", "2", "--k", "0"]) == 2
    assert "error" in capsys.readouterr().err
    assert run(["eisenstein", "--family", "hyperharmonic", "--classes", "10"]) == 2


def test_policy_flags_are_exclusive():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["eisenstein", "--B", "10", "--words", "3"])


def test_beta_compare(capsys):
    rc, doc = run_json(capsys, "beta-compare", "--n", "2", "--k", "0", "--m", "1,0", "--xn", "1")
    assert rc == 0 and len(doc["rows"]) == 1


def test_failed_check_exit_code():
    rep = Report("x", {})
    rep.check("err", 1.0, 0.5)
    assert not rep.passed
    rep = Report("x", {})
    rep.check("err", float("inf"), float("inf"), "<=")
    assert not rep.passed and "inf" in rep.to_json()


def test_csv_output(capsys):
    assert run(["bessel-check", "--cases", "5", "--format", "csv"]) == 0
    text = capsys.readouterr().out
    assert text.splitlines()[0].count(",") >= 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hypermonogenic", "algebra-check", "--cases", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"]


def test_run_config_validates_gates():
    from hypermonogenic.cli import RunConfig
    from hypermonogenic.errors import DivergentSpecError

    assert RunConfig("eisenstein").eisenstein_spec().policy.norm_bound == 400.0
    with pytest.raises(DivergentSpecError):
        RunConfig("eisenstein", k=0.0).eisenstein_spec()
    args = build_parser().parse_args(["eisenstein", "--k", "-3", "--B", "50"])
    cfg = RunConfig.from_args(args)
    assert (cfg.k, cfg.B, cfg.format) == (-3.0, 50.0, "json")
