import json
import subprocess
import sys

import numpy as np
import pytest

from glnalg import star
from glnalg.cli import main
from glnalg.suites import ALL_SUITES, CATALOG, MUTATIONS, RELATION_IDS, RunConfig, ConfigError, run


def _json(capsys, argv):
    code = main(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def test_verify_gln_n3(capsys):
    code, doc = _json(capsys, ["verify", "gln", "--n", "3"])
    assert code == 0
    assert doc["pass"]
    assert all(r["residual"] == "0" for s in doc["suites"] for r in s["records"])


def test_star_example(capsys):
    code, doc = _json(capsys, ["star", "--n", "4", "--u", "0.3", "--samples", "100", "--seed", "7", "--tol", "1e-12"])
    assert code == 0
    recs = {r["id"]: r for r in doc["suites"][0]["records"]}
    assert float(recs["D-assoc"]["residual"]) < 1e-12
    assert doc["suites"][0]["meta"]["seed"] == 7


def test_report_schema(capsys):
    code, doc = _json(capsys, ["verify", "duality"])
    assert code == 0
    assert doc["schemaVersion"] == 1
    assert doc["tool"]["name"] == "glnalg" and doc["tool"]["version"]
    assert doc["config"]["suites"] == ["duality"]
    for rec in doc["suites"][0]["records"]:
        assert {"id", "anchor", "pass", "residual"} <= set(rec)
        assert "elapsed" not in rec
        assert rec["id"] in CATALOG


def test_timings_flag_adds_elapsed(capsys):
    _, doc = _json(capsys, ["star", "--samples", "3", "--timings"])
    assert all("elapsed" in r for r in doc["suites"][0]["records"])


def test_reports_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["run", "--suites", "gln,star,coproduct", "--samples", "20"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b), "--workers", "2"]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    assert not list(tmp_path.glob(".*.tmp"))


@pytest.mark.parametrize("suite", ALL_SUITES)
def test_negative_controls_exit_1(suite, capsys):
    argv = ["verify", suite, "--mutate"]
    if suite == "star":
        argv += ["--samples", "10"]
    if suite in ("general", "family"):
        argv += ["--n", "1"]
    code = main(argv + ["--json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 1
    s = doc["suites"][0]
    assert s["mutation"] == MUTATIONS[suite]
    assert any(not r["pass"] and r["residual"] not in ("0", "0.000e+00") for r in s["records"])


def test_singular_branch_is_a_failed_check(monkeypatch, capsys):
    u = 0.3
    bad = np.diag([1j * np.pi / u, 0]).astype(complex)
    monkeypatch.setattr(star, "sample_matrix", lambda rng, n, uu: bad.copy())
    code, doc = _json(capsys, ["star", "--n", "2", "--u", str(u), "--samples", "2"])
    assert code == 1
    branch = [r for r in doc["suites"][0]["records"] if r["check"] == "star/branch"]
    assert branch and not branch[0]["pass"]
    assert "negative real axis" in branch[0]["residual"]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "gln", "--tol", "-1"],
        ["verify", "gln", "--n", "7"],
        ["verify", "cocycle", "--max-degree", "5"],
        ["run", "--suites", "gln,bogus"],
        ["verify", "nosuch"],
        ["star", "--samples", "0"],
    ],
)
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{\n  "n": 1,\n  "suites": ["gln"],\n  "tol": 0\n}\n')
    assert main(["run", "--config", str(cfg)]) == 2
    err = capsys.readouterr().err
    assert "line 4" in err and "tol" in err
    assert main(["run", "--config", str(cfg), "--tol", "1e-9"]) == 0
    capsys.readouterr()


def test_config_file_syntax_error(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{\n  "n": 1\n  "suites": ["gln"]\n}\n')
    assert main(["run", "--config", str(cfg)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_config_unknown_field(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"colour": 1}')
    assert main(["run", "--config", str(cfg)]) == 2
    assert "colour" in capsys.readouterr().err


def test_spec_file_option(tmp_path, capsys):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"n": 1, "label": "user", "S": {"1,1": [{"uPower": 1, "pMonomial": "p[1,1]^3"}]}}))
    code, doc = _json(capsys, ["verify", "general", "--n", "1", "--spec", str(spec)])
    assert code == 0
    assert "user" in doc["suites"][0]["meta"]["specs"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 1, "S": {"1,1": [{"uPower": 0, "pMonomial": "p[1,1]"}]}}))
    assert main(["verify", "general", "--spec", str(bad)]) == 2


def test_explain(capsys):
    assert main(["explain", "D-assoc"]) == 0
    out = capsys.readouterr().out
    assert "associativity of the star product" in out and "D(D(k,q),r)" in out
    assert main(["explain", "cocycle"]) == 0
    assert "cocycle" in capsys.readouterr().out
    assert main(["explain", "bogus"]) == 2
    assert "unknown check" in capsys.readouterr().err


def test_catalog_covers_every_relation():
    assert set(RELATION_IDS.values()) <= set(CATALOG)
    for rel in star.STAR_TOLERANCES:
        assert rel in CATALOG


def test_runconfig_validation():
    with pytest.raises(ConfigError):
        RunConfig(seed=-1).validate()
    with pytest.raises(ConfigError):
        RunConfig(symbolic_u=False).validate()
    assert RunConfig().validate().n is None


def test_default_run_passes():
    doc = run(RunConfig(samples=20))
    assert doc["pass"]
    assert [s["suite"] for s in doc["suites"]] == list(ALL_SUITES)
    star_meta = next(s for s in doc["suites"] if s["suite"] == "star")["meta"]
    assert star_meta["n"] == 3


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "glnalg", "explain", "K-inverse"], capture_output=True, text=True)
    assert res.returncode == 0 and "K^-1" in res.stdout
