import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from juntabound import cli, oracle
from juntabound.boolfn import to_text, tribes
from juntabound.rational import parse_frac
from juntabound.wrec import tail_sum


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--format", "json")
    assert code == 0, text
    return json.loads(text)


# -- bs-table ---------------------------------------------------------------


def test_bs_table_text():
    code, text = run("bs-table", "--dmax", "6")
    assert code == 0
    lines = text.splitlines()
    assert lines[0].startswith("# juntabound ")
    assert "1 → 1" in lines and "6 → 21" in lines


def test_bs_table_json_and_csv():
    doc = run_json("bs-table", "--dmax", "3")
    assert [(r["d"], r["b"]) for r in doc["rows"]] == [(1, 1), (2, 3), (3, 6)]
    assert doc["rows"][0]["witness"] is None
    assert all(isinstance(x, str) and "/" in x for x in doc["rows"][2]["witness"])
    code, text = run("bs-table", "--dmax", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["d", "b", "ratio", "ratio_decimal"]
    assert rows[1:] == [["1", "1", "1/1", "1.000000"], ["2", "3", "3/4", "0.750000"]]


def test_bs_table_persist_and_lp_check(tmp_path):
    path = tmp_path / "caps.jsonl"
    code, _ = run("bs-table", "--dmax", "4", "--persist", str(path))
    assert code == 0
    code, text = run("lp-check", str(path))
    assert code == 0 and text.startswith("52 records, 52 verified, 0 failed")
    recs = [json.loads(line) for line in path.read_text().splitlines()]
    victim = next(r for r in recs if r["status"] == "feasible")
    victim["witness"][0] = "99/1"
    path.write_text("".join(json.dumps(r) + "\n" for r in recs))
    code, text = run("lp-check", str(path))
    assert code == 1 and "FAILED" in text


def test_lp_check_edge_cases(tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    assert run("lp-check", str(empty)) == (0, "0 records\n")
    junk = tmp_path / "junk.jsonl"
    junk.write_text("{not json\n")
    assert run("lp-check", str(junk))[0] == 2
    assert run("lp-check", str(tmp_path / "missing.jsonl"))[0] == 2
    assert run("lp-check")[0] == 2


# -- w-table / w-star -------------------------------------------------------


def test_w_table_examples():
    doc = run_json("w-table", "--depth", "14", "--caps", "lp")
    by_d = {r["d"]: r for r in doc["rows"]}
    assert by_d[8]["w"] == "63/16" and by_d[8]["decimal"] == "3.937500"
    code, text = run("w-table", "--depth", "14", "--caps", "lp", "--digits", "3")
    last = text.splitlines()[-1]
    assert last.startswith("d=14  b=114   W <= ") and Fraction(last.split()[4]) <= Fraction("4.349")
    doc = run_json("w-table", "--depth", "7", "--caps", "lp")
    assert doc["rows"][-1]["w"] == "7/2"
    doc = run_json("w-table", "--depth", "2", "--caps", "worst")
    assert [r["w"] for r in doc["rows"]] == ["1/2", "1/1"]


def test_w_table_from_persisted_records(tmp_path):
    path = tmp_path / "caps.jsonl"
    run("bs-table", "--dmax", "5", "--persist", str(path))
    a = run("w-table", "--depth", "5", "--bs-records", str(path))
    b = run("w-table", "--depth", "5")
    assert a == b
    path.write_text(path.read_text().replace('"feasible","witness":["', '"feasible","witness":["7', 1))
    assert run("w-table", "--depth", "5", "--bs-records", str(path))[0] == 2


def test_w_star_examples():
    doc = run_json("w-star", "--depth", "30", "--caps", "lp")
    assert parse_frac(doc["total"]) <= Fraction(44158, 10000)
    doc = run_json("w-star", "--depth", "50", "--caps", "worst")
    assert abs(float(parse_frac(doc["head"])) - 5.07812) < 0.0005
    doc = run_json("w-star", "--depth", "1", "--caps", "worst")
    assert parse_frac(doc["total"]) == Fraction(1, 2) + tail_sum(2)
    assert doc["half_degree"] is True and doc["depth"] == 1
    code, text = run("w-star", "--depth", "3", "--format", "csv")
    assert text.splitlines()[0] == "depth,caps,half_degree,head,tail,total,head_decimal,tail_decimal,total_decimal"


@pytest.mark.parametrize("argv", [
    ["w-table", "--depth", "14", "--caps", "lp"],
    ["w-table", "--depth", "20", "--caps", "worst", "--digits", "2"],
    ["w-star", "--depth", "30"],
    ["w-star", "--depth", "9", "--digits", "1"],
])
def test_printed_decimals_are_upper_bounds(argv):
    doc = run_json(*argv)
    pairs = [(r["w"], r["decimal"]) for r in doc["rows"]] if "rows" in doc else \
        [(doc[k], doc[k + "_decimal"]) for k in ("head", "tail", "total")]
    for exact, shown in pairs:
        assert Fraction(shown) >= parse_frac(exact)


# -- analyze ----------------------------------------------------------------


def test_analyze_examples(tmp_path):
    doc = run_json("analyze", "2:0001")
    assert (doc["degree"], doc["block_sensitivity"], doc["w"], doc["total_influence"]) == (2, 2, "1/2", "1/1")
    doc = run_json("analyze", "2:0110")
    assert (doc["degree"], doc["block_sensitivity"], doc["w"], doc["s"]) == (2, 2, "1/2", "1/8")
    path = tmp_path / "tribes.txt"
    path.write_text(to_text(tribes(2, 2)) + "\n")
    doc = run_json("analyze", str(path))
    assert (doc["degree"], doc["block_sensitivity"], doc["sensitivity"]) == (4, 2, 2)
    code, text = run("analyze", "3:0x96")
    assert code == 0 and "block sensitivity  3" in text


def test_analyze_errors():
    assert run("analyze", "2:012")[0] == 2
    assert run("analyze")[0] == 2
    assert run("analyze", "13:0x" + "0" * 2048)[0] == 2


# -- verify -----------------------------------------------------------------


def test_verify_small():
    doc = run_json("verify", "--n", "2")
    assert doc["ok"] is True
    assert doc["suite"]["functions_checked"] == 16 and doc["suite"]["counterexamples"] == []
    code, text = run("verify", "--n", "2", "--format", "csv")
    assert code == 0 and text.startswith("suite,check,passed,vacuous\n")


def test_verify_failure_path(monkeypatch):
    real = oracle.default_tables

    def broken(n):
        wt, caps = real(n)
        return wt, {d: 1 for d in caps}

    monkeypatch.setattr(oracle, "default_tables", broken)
    code, text = run("verify", "--n", "2")
    assert code == 1
    assert "bs_le_lp_cap: 2:0110" in text


# -- usage errors and the installed entry point -----------------------------


@pytest.mark.parametrize("argv", [
    [], ["nope"], ["w-table", "--depth", "0"], ["w-table", "--digits", "0"], ["bs-table", "--dmax", "0"],
    ["bs-table", "--jobs", "0"], ["w-star", "--caps", "best"], ["verify", "--n", "5"], ["w-table", "--depth", "x"],
])
def test_usage_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_help_exits_0():
    assert run("--help")[0] == 0


def test_output_is_independent_of_jobs():
    assert run("bs-table", "--dmax", "5", "--jobs", "1") == run("bs-table", "--dmax", "5", "--jobs", "3")
    assert run("verify", "--n", "3", "--jobs", "1") == run("verify", "--n", "3", "--jobs", "2")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "juntabound", "w-table", "--depth", "2", "--caps", "worst"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "d=2" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "juntabound", "analyze", "2:01"], capture_output=True, text=True)
    assert proc.returncode == 2 and "error" in proc.stderr
