import csv
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from kforest.cli import main
from kforest.instance_io import serialize_instance

from conftest import make

T3_TEXT = "p kforest 3 3 2 1\ne 1 2 1\ne 2 3 1\ne 1 3 1\nd 1 2\nd 2 3\n"


@pytest.fixture
def t3_file(tmp_path):
    p = tmp_path / "t3.kf"
    p.write_text(T3_TEXT)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_json(capsys, t3_file):
    code, out, _ = run(capsys, "solve", "--input", t3_file, "--epsilon", "1/2", "--verify", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["solution"]["removed_count"] <= 1
    assert all(v["ok"] for v in report["verification"])
    assert report["solution"]["r_target"] == "3/4"
    assert "timing_ms" not in report


def test_solve_text_trace_timing(capsys, t3_file, tmp_path):
    tr = tmp_path / "events.jsonl"
    code, out, _ = run(capsys, "solve", "--input", t3_file, "--trace", "--timing", "--transcript", str(tr))
    assert code == 0 and "branch" in out and "time:" in out
    events = [json.loads(line) for line in tr.read_text().splitlines()]
    assert events and all("type" in e for e in events)


def test_solve_deterministic(capsys, t3_file):
    a = run(capsys, "solve", "--input", t3_file, "--json", "--trace", "--verify")[1]
    b = run(capsys, "solve", "--input", t3_file, "--json", "--trace", "--verify")[1]
    assert a == b


def test_solve_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--input", str(tmp_path / "nope.kf"))
    assert code == 1 and "cannot read" in err


def test_solve_parse_error(capsys, tmp_path):
    p = tmp_path / "bad.kf"
    p.write_text("p kforest 3 3 2 1\ne 1 2 1\n")
    assert run(capsys, "solve", "--input", str(p))[0] == 1


def test_solve_bad_epsilon(capsys, t3_file):
    assert run(capsys, "solve", "--input", t3_file, "--epsilon", "0.5")[0] == 1
    assert run(capsys, "solve", "--input", t3_file, "--epsilon", "3/2")[0] == 1


def test_solve_infeasible(capsys, tmp_path):
    p = tmp_path / "inf.kf"
    p.write_text(serialize_instance(make(4, [(1, 2, 5)], [(1, 3), (2, 4), (1, 2)], 2)))
    assert run(capsys, "solve", "--input", str(p))[0] == 2


def test_solve_certificate_failure(capsys, t3_file, monkeypatch):
    from kforest import search
    from kforest.pcgst import PcgstOutcome, run_pcgst

    def broken(inst, lam):
        out = run_pcgst(inst, lam)
        return PcgstOutcome(out.lam, out.forest, out.removed, out.dual_sets, ())

    monkeypatch.setattr(search, "run_pcgst", broken)
    monkeypatch.setattr(search.solve_kforest, "__defaults__", (broken,))
    code, _, err = run(capsys, "solve", "--input", t3_file, "--verify")
    assert code == 3 and "certificate" in err


def test_verify_lambda(capsys, t3_file):
    code, out, _ = run(capsys, "verify", "--input", t3_file, "--lambda", "3/4", "--dump-outcome")
    assert code == 0
    data = json.loads(out)
    assert data["report"]["ok"] and data["outcome"]["lambda"] == "3/4"


def test_verify_outcome_file(capsys, t3_file, tmp_path):
    _, out, _ = run(capsys, "verify", "--input", t3_file, "--lambda", "1/1", "--dump-outcome")
    outcome = json.loads(out)["outcome"]
    good = tmp_path / "good.json"
    good.write_text(json.dumps(outcome))
    assert run(capsys, "verify", "--input", t3_file, "--outcome", str(good))[0] == 0
    outcome["dual_sets"][0]["y"] = "100/1"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(outcome))
    code, out, _ = run(capsys, "verify", "--input", t3_file, "--outcome", str(bad))
    report = json.loads(out)["report"]
    assert code == 3 and not report["edge_feasible"] and not report["charge_cover_ok"]


def test_oracle(capsys, t3_file):
    code, out, _ = run(capsys, "oracle", "--input", t3_file, "--u", "1")
    assert code == 0 and json.loads(out)["opt_cost"] == 1


def test_oracle_infeasible(capsys, tmp_path):
    p = tmp_path / "s.kf"
    p.write_text(serialize_instance(make(4, [(1, 2, 5)], [(1, 2), (3, 4)], 1)))
    code, out, _ = run(capsys, "oracle", "--input", str(p), "--u", "0")
    assert code == 0 and json.loads(out)["opt_cost"] == "INFEASIBLE"


def test_oracle_too_large(capsys, tmp_path):
    p = tmp_path / "big.kf"
    p.write_text(serialize_instance(make(2, [(1, 2, 1)] * 25, [(1, 2)], 1)))
    assert run(capsys, "oracle", "--input", str(p), "--u", "0")[0] == 4


def test_gen_roundtrip(capsys, tmp_path):
    target = tmp_path / "g.kf"
    args = ["gen", "--family", "random_gnp", "--n", "6", "--m", "3", "--k", "1", "--seed", "42",
            "--edge-prob", "1/2"]
    assert run(capsys, *args, "--output", str(target))[0] == 0
    code, out, _ = run(capsys, *args)
    assert code == 0 and out == target.read_text()
    assert run(capsys, "solve", "--input", str(target))[0] in (0, 2)


def test_gen_spec_error(capsys):
    assert run(capsys, "gen", "--family", "star_pairs", "--n", "3", "--m", "5")[0] == 1


def test_bench_empty(capsys, tmp_path):
    spec = tmp_path / "empty.json"
    spec.write_text("")
    out = tmp_path / "out.csv"
    assert run(capsys, "bench", "--spec", str(spec), "--output", str(out))[0] == 0
    rows = list(csv.reader(out.open()))
    assert rows == [["seed", "n", "edges", "m", "k", "epsilon", "cost", "opt", "ratio", "bound",
                     "iterations", "hj_calls", "ms", "error"]]


def test_bench_rows(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps([
        {"family": "star_pairs", "n": 5, "m": 3, "k": 1, "seed": 10, "epsilon": ["1/2", "1/4"]},
        {"family": "random_gnp", "n": 3, "m": 3, "k": 0, "seed": 1, "edge_prob": "0"},
    ]))
    out = tmp_path / "out.csv"
    assert run(capsys, "bench", "--spec", str(spec), "--repetitions", "3", "--output", str(out))[0] == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 3 * 2 + 3
    for row in rows[:6]:
        assert row["error"] == ""
        assert Fraction(row["ratio"]) <= Fraction(row["bound"])
    assert [r["seed"] for r in rows[:6:2]] == ["10", "11", "12"]


def test_bench_bad_spec(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text("{not json")
    assert run(capsys, "bench", "--spec", str(spec))[0] == 1
    assert run(capsys, "bench", "--spec", str(tmp_path / "missing.json"))[0] == 1


def test_help_lists_exit_codes():
    res = subprocess.run([sys.executable, "-m", "kforest.cli", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "exit codes" in res.stdout


def test_console_script(t3_file):
    res = subprocess.run(["kforest", "solve", "--input", t3_file, "--json"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["solution"]["cost"] in (1, 2)
