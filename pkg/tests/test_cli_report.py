"""CLI harness and report serialization."""

import json
from fractions import Fraction as Q

import pytest

from wicklab.cli import main, parse_piecewise
from wicklab.report import Check, ExperimentReport


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_wick_table_matches_golden_row(capsys):
    code, rep = run_cli(capsys, "wick", "table", "--law", "normal", "--max-n", "5")
    assert code == 0
    w5 = next(r for r in rep["results"] if r["name"] == "W_5")
    assert w5["value"]["coeffs"] == ["0", "15", "0", "-10", "0", "1"]


def test_wick_table_exponential(capsys):
    code, rep = run_cli(capsys, "wick", "table", "--law", "exponential:2", "--max-n", "3")
    assert code == 0
    w3 = next(r for r in rep["results"] if r["name"] == "W_3")
    assert w3["value"]["coeffs"] == ["0", "0", "-3/2", "1"]


def test_discrete_nmax(capsys):
    code, rep = run_cli(capsys, "discrete", "nmax", "--n", "8")
    assert code == 0
    assert rep["results"][0]["value"] == 4


def test_rademacher_verify_alphas(capsys):
    code, rep = run_cli(
        capsys,
        "rademacher",
        "verify",
        "--alphas",
        "1/3,1/4,2/5,1/2,1/6",
        "--depth",
        "5",
        "--tuples",
        "2",
    )
    assert code == 0
    assert rep["status"] == "pass"


def test_rademacher_infeasible_scheme_is_an_error(capsys):
    code = main(
        [
            "rademacher",
            "verify",
            "--scheme",
            "jump_alternating",
            "--fx0",
            "1/10",
            "--delta",
            "1/20",
            "--depth",
            "4",
        ]
    )
    assert code == 2
    err = capsys.readouterr().err
    assert "C3" in err


def test_all_quick_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["--out", str(out1), "all", "--quick", "--seed", "42"]) == 0
    assert main(["--out", str(out2), "all", "--quick", "--seed", "42"]) == 0
    strip = lambda t: "\n".join(
        l for l in t.splitlines() if '"wall_time_s"' not in l
    )
    assert strip(out1.read_text()) == strip(out2.read_text())


def test_parse_piecewise_forms():
    p = parse_piecewise('["0", "1"]')
    assert p.eval(Q(1, 2)) == Q(1, 2)
    p2 = parse_piecewise('{"pieces": [{"lo": "0", "hi": "1/2", "coeffs": ["2"]}]}')
    assert p2.eval(Q(1, 4)) == 2
    assert p2.eval(Q(3, 4)) == 0


def test_report_roundtrip():
    rep = ExperimentReport("demo", {"law": "normal", "x": Q(1, 3)})
    rep.add(Check("exact_value", "exact", Q(22, 7), passed=True))
    rep.add(Check("estimate", "estimate", 0.5, stderr=0.01, tol=0.05, passed=True))
    rep.add(Check("note", "info", [1, 2, 3]))
    text = rep.to_json()
    back = ExperimentReport.from_json(text)
    assert back.to_json() == text
    assert back.status == "pass"
    d = json.loads(text)
    assert d["config"]["x"] == "1/3"
    assert d["results"][0]["value"] == "22/7"


def test_report_status_fail():
    rep = ExperimentReport("demo", {})
    rep.add(Check("good", "exact", 1, passed=True))
    rep.add(Check("bad", "exact", 0, passed=False))
    assert rep.status == "fail"
