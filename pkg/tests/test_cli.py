import json
import subprocess
import sys

import pytest

from dickson.certificate import BoundCertificate, check_certificate
from dickson.cli import main, run
from dickson.dsl import parse_sequence


def test_witness_and_certify(tmp_path):
    status, out = run(["witness", "--seq", "dec(5)", "--l", "2"])
    assert status == 0
    cert = json.loads(out)
    assert cert["indices"] == [5, 6] and cert["bound"] == 6
    path = tmp_path / "cert.json"
    path.write_text(out)
    status, out = run(["certify", "--in", str(path), "--seq", "dec(5)"])
    assert status == 0 and json.loads(out)["ok"]
    status, out = run(["certify", "--in", str(path), "--seq", "dec(4)"])
    assert status == 1 and not json.loads(out)["ok"]


def test_witness_output_rechecks():
    argv = ["witness", "--seq", "prefix(1,0);const(0)", "--seq", "prefix(0,1);const(1)", "--l", "3"]
    status, out = run(argv)
    cert = BoundCertificate.from_json(out)
    seqs = [parse_sequence("prefix(1,0);const(0)"), parse_sequence("prefix(0,1);const(1)")]
    assert status == 0 and check_certificate(seqs, cert).ok


def test_out_file(tmp_path, capsys):
    path = tmp_path / "w.json"
    assert main(["witness", "--seq", "dec(2)", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["indices"] == [2, 3]


def test_sequence_from_file(tmp_path):
    path = tmp_path / "seq.txt"
    path.write_text("dec(3)\n")
    status, out = run(["witness", "--seq", f"@{path}"])
    assert json.loads(out)["indices"] == [3, 4]


def test_gap_flag():
    status, out = run(["witness", "--seq", "prefix(1,0,0,0);const(0)", "--gap", "3"])
    assert status == 0 and json.loads(out)["indices"] == [1, 4]


def test_counterexample():
    status, out = run(["counterexample", "--n-max", "10"])
    assert status == 0 and json.loads(out)["verdict"] == "refuted all pairs"


@pytest.mark.parametrize("argv", [
    ["refute-2d", "--f", "f2:i+j", "--l", "3"],
    ["refute-2d", "--f", "f2:(i+j)*(i+j+1)/2+j", "--l", "3", "--m", "2", "--trials", "2"],
    ["refute-3d", "--f1", "f3:0", "--f2", "f3:0"],
    ["lex-refute", "--f", "f2:0"],
])
def test_refuters_exit_2(argv):
    status, out = run(argv)
    assert status == 2
    assert json.loads(out)["kind"] in ("refutation", "lex_violation")


def test_other_subcommands():
    status, out = run(["dichotomy", "--seq", "const(5)", "--seq", "const(5)", "--M", "3"])
    assert status == 0 and json.loads(out)["variant"]["type"] == "crossing"
    status, out = run(["pigeonhole", "--seq", "periodic(0,1)", "--l", "3"])
    assert status == 0 and len(json.loads(out)["indices"]) == 3
    status, out = run(["pigeonhole", "--seq", "affine(1,0)", "--M", "3"])
    assert json.loads(out) == {"budget": 10**7, "index": 3, "kind": "not_all_below", "value": 3}
    status, out = run(["oracle", "--seq", "dec(4)", "--horizon", "10"])
    assert json.loads(out)["minimal_witness"] == [4, 5]
    status, out = run(["tightness", "--family", "dec", "--params", "1..3", "--jobs", "2"])
    assert out.splitlines()[0] == "family,param,l,extracted_bound,minimal_last_index,tight,evals"
    assert len(out.splitlines()) == 4


def test_budget_exit_code():
    argv = ["witness", "--l", "4", "--budget", "5000"] + sum(
        (["--seq", f"affine({a},{b})"] for a, b in [(1, 0), (2, 1), (1, 3), (3, 0)]), [])
    assert run(argv)[0] == 3


@pytest.mark.parametrize("argv", [
    ["witness", "--seq", "dec("],
    ["witness", "--bogus"],
    ["nope"],
    [],
    ["witness"],
    ["refute-2d", "--f", "f3:i"],
    ["dichotomy", "--seq", "const(0)", "--M", "1"],
    ["certify", "--in", "/nonexistent/cert.json", "--seq", "dec(1)"],
    ["oracle", "--seq", "const(0)", "--l", "5", "--horizon", "500"],
])
def test_usage_errors_exit_4(argv):
    assert run(argv)[0] == 4


def test_budget_recorded_in_output():
    _, out = run(["witness", "--seq", "dec(5)", "--budget", "50"])
    assert json.loads(out)["meta"] == {"budget": 50, "evals": 7}


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dickson", "witness", "--seq", "dec(5)"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["bound"] == 6
    proc = subprocess.run([sys.executable, "-m", "dickson", "witness", "--seq", "x"],
                          capture_output=True, text=True)
    assert proc.returncode == 4 and proc.stdout == "" and "error" in proc.stderr
