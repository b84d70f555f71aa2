"""The command-line front end."""
import csv
import io
import json
import subprocess
import sys

from knead import cli
from knead.errors import IdentityViolated

from conftest import DATA


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_check_bundled_map(capsys):
    code, rep = run_json(capsys, "check", "circle_doubling")
    assert code == 0 and rep["ok"]
    assert rep["schema"] == cli.SCHEMA
    res = rep["results"][0]
    assert res["h1"] == [[2]]
    assert res["graph"]["h1_rank"] == 1


def test_fix_tent(capsys):
    code, rep = run_json(capsys, "fix", "tent", "--n", "10")
    assert code == 0
    rows = rep["results"][0]["rows"]
    assert [r["fix_neg_graph"] for r in rows] == [2 ** k for k in range(10)]
    assert [r["fix"] for r in rows] == [2 ** k for k in range(1, 11)]


def test_fix_reports_infinite_fixed_sets(capsys):
    code, rep = run_json(capsys, "fix", str(DATA / "diagonal.json"), "--n", "3")
    assert code == 0
    assert "identity on the lap" in rep["results"][0]["artin_mazur"]["diagnostic"]


def test_entropy_contraction(capsys):
    code, rep = run_json(capsys, "entropy", "contraction")
    assert code == 0
    res = rep["results"][0]
    assert res["h_top"] == 0.0 and res["h_hom"] == 0.0 and res["max_formula_ok"]


def test_kneading_and_zeta(capsys):
    code, rep = run_json(capsys, "kneading", "tent", "--degree", "6")
    assert code == 0
    res = rep["results"][0]
    assert res["D"] == ["1", "-2"] + ["0"] * 5
    assert res["L"] == ["1"] + ["0"] * 6
    code, rep = run_json(capsys, "zeta", "tent", "--degree", "6", "--n", "4")
    res = rep["results"][0]
    assert res["zeta_mt_times_D_equals_H"]
    assert res["count_sources"] == {"laps": 4, "traces": 2}
    assert res["zeta_lefschetz"]["closed_form"]["denominator"] == ["1", "-1"]


def test_laps_csv(capsys):
    code, out = run(capsys, "laps", "tent", "golden", "--n", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["laps"] for r in rows if r["map"] == "tent"] == ["2", "4", "8", "16"]
    assert len(rows) == 8


def test_text_format(capsys):
    code, out = run(capsys, "check", "tent", "--format", "text")
    assert code == 0
    assert any(line.startswith("results[0].map") and "tent" in line
               for line in out.splitlines())


def test_input_error_exit_code(capsys):
    code, rep = run_json(capsys, "check", str(DATA / "slope_zero.json"))
    assert code == cli.EXIT_INPUT
    res = rep["results"][0]
    assert res["error"] == "SemanticError" and res["cause"] == "NonMonotoneBranch"
    code, rep = run_json(capsys, "check", str(DATA / "zero_denominator.json"))
    assert code == cli.EXIT_INPUT
    assert (rep["results"][0]["line"], rep["results"][0]["column"]) == (4, 21)


def test_budget_exit_code(capsys):
    code, rep = run_json(capsys, "laps", "tent", "--n", "12", "--budget", "100")
    assert code == cli.EXIT_BUDGET
    assert rep["results"][0]["error"] == "LapBudgetExceeded"


def test_identity_exit_code(capsys, monkeypatch):
    def broken(defn, config):
        raise IdentityViolated("test identity", 3, 1, 2)
    monkeypatch.setitem(cli.WORKERS, "check", broken)
    code, rep = run_json(capsys, "check", "tent")
    assert code == cli.EXIT_IDENTITY
    assert rep["results"][0]["error"] == "IdentityViolated"


def test_worst_exit_code_wins_and_order_is_kept(capsys):
    code, rep = run_json(capsys, "check", "tent", str(DATA / "slope_zero.json"), "golden")
    assert code == cli.EXIT_INPUT
    assert [r["ok"] for r in rep["results"]] == [True, False, True]


def test_output_is_deterministic_across_jobs(capsys, tmp_path):
    outs = []
    for jobs in ("1", "2"):
        path = tmp_path / f"out{jobs}.json"
        code = cli.main(["entropy", "tent", "golden", "circle_flip", "--jobs", jobs,
                         "-o", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_appendix_selftest(capsys):
    code, rep = run_json(capsys, "appendix-selftest", "--seed", "3")
    assert code == 0 and rep["ok"]
    assert len(rep["results"]) == 50


def test_verify_one_map(capsys):
    code, rep = run_json(capsys, "verify", "golden")
    assert code == 0
    checks = rep["results"][0]["checks"]
    assert all(c["ok"] for c in checks)
    assert rep["appendix_selftest"]["ok"]


def test_bad_option_value(capsys):
    assert cli.main(["check", "tent", "--degree", "0"]) == cli.EXIT_INPUT


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "knead.cli", "check", "tent"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["ok"]
