import json
import subprocess
import sys

import pytest

from rgdlin.cli import EXIT_CONFIG, EXIT_OK, EXIT_PRECONDITION, FORMAT, FORMAT_VERSION, main
from rgdlin.coxeter import CoxeterMatrix, CoxeterSystem
from rgdlin.witness import certificate_to_json, pair_exclusion_for


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    records = [json.loads(line) for line in out.out.splitlines()]
    return code, records, out.err


def test_interval_universal_witness(capsys):
    code, recs, _ = run(capsys, "interval", "- e : r", "s : t")
    assert code == EXIT_OK
    head, rec = recs
    assert head["format"] == FORMAT and head["version"] == FORMAT_VERSION
    assert rec["strict"] and rec["missing"] == ["e : s"]
    assert {m["root"] for m in rec["geometric"]} == {"- e : r", "e : s", "s : t"}


def test_interval_dihedral_equality(capsys):
    code, recs, _ = run(capsys, "interval", "--matrix", "dihedral:4", "e : s", "s t s : t")
    assert code == EXIT_OK
    assert recs[1]["equal"] and not recs[1]["strict"]
    assert all(m["status"] == "exact" for m in recs[1]["geometric"])


def test_interval_equal_roots(capsys):
    code, recs, _ = run(capsys, "interval", "--matrix", "type444", "r s : t", "r s : t")
    assert code == EXIT_OK
    assert [m["root"] for m in recs[1]["geometric"]] == ["r s : t"]
    assert [m["root"] for m in recs[1]["algebraic"]] == ["r s : t"]


def test_interval_multiple_bases(capsys):
    code, recs, _ = run(capsys, "interval", "--basis", "sample:3,2", "- e : r", "s t s : t")
    assert code == EXIT_OK
    assert [r["basis"] for r in recs[1:]] == ["sample:3", "sample:4"]
    assert all("e : s" in r["missing"] and r["strict"] for r in recs[1:])


def test_interval_exit_codes(capsys):
    assert run(capsys, "interval", "e : r", "- e : r")[0] == EXIT_PRECONDITION
    assert run(capsys, "interval", "e : s", "e : t")[0] == EXIT_PRECONDITION
    assert run(capsys, "interval", "x : r", "e : s")[0] == EXIT_CONFIG
    assert run(capsys, "interval", "e r", "e : s")[0] == EXIT_CONFIG
    assert run(capsys, "interval", "--matrix", "nope", "e : r", "e : s")[0] == EXIT_CONFIG
    assert run(capsys, "interval", "--radius", "0", "e : r", "e : s")[0] == EXIT_CONFIG
    assert run(capsys, "interval", "--basis", "weird", "e : r", "r : s")[0] == EXIT_CONFIG
    assert run(capsys, "bogus")[0] == EXIT_CONFIG


def test_scan_universal(capsys):
    code, recs, _ = run(capsys, "scan", "--length", "2")
    assert code == EXIT_OK
    summary = recs[-1]
    assert summary["type"] == "summary" and summary["divergences"] == len(recs) - 2 > 0


def test_scan_rank2_empty(capsys):
    code, recs, _ = run(capsys, "scan", "--matrix", "dihedral:inf", "--length", "5")
    assert code == EXIT_OK
    assert recs[-1]["divergences"] == 0 and len(recs) == 2


def test_witness_universal(capsys):
    code, recs, _ = run(capsys, "witness", "--family", "universal", "--K", "0")
    assert code == EXIT_OK
    assert recs[-1]["verdict"] == "not linearizable (certified)"
    verdicts = [r for r in recs if r.get("type") == "verdict"]
    assert verdicts[0]["status"] == "not-linear" and verdicts[0]["witness"] == "e : s"


def test_witness_444(capsys):
    code, recs, _ = run(capsys, "witness", "--family", "type444", "--K", "3", "--basis", "sample:0,2")
    assert code == EXIT_OK
    assert recs[-1]["verdict"] == "not linearizable (certified)"
    assert [r["nc"] for r in recs if r.get("type") == "nc"] == [False]


def test_witness_trivial(capsys):
    code, recs, _ = run(capsys, "witness", "--family", "universal", "--K", "")
    assert code == EXIT_OK
    assert [r["nc"] for r in recs if r.get("type") == "nc"] == [True]
    assert recs[-1]["verdict"] == "linearizable (nc)"


def test_witness_invalid_K(capsys):
    assert run(capsys, "witness", "--family", "type444", "--K", "2")[0] == EXIT_PRECONDITION
    assert run(capsys, "witness", "--family", "universal", "--K", "a,b")[0] == EXIT_CONFIG
    assert run(capsys, "witness", "--family", "universal", "--matrix", "type444", "--K", "0")[0] == EXIT_PRECONDITION


def test_certify(capsys, tmp_path):
    S = CoxeterSystem(CoxeterMatrix.type444())
    path = tmp_path / "certs.jsonl"
    c = pair_exclusion_for(S, 3)
    bad = pair_exclusion_for(S, 3).__class__(c.alpha, c.beta, c.gamma, c.gamma)
    path.write_text(certificate_to_json(c) + "\n" + certificate_to_json(bad) + "\n")
    code, recs, _ = run(capsys, "certify", "--matrix", "type444", str(path))
    assert code == EXIT_OK
    assert [r["accepted"] for r in recs[1:-1]] == [True, False]
    path.write_text("{}\n")
    assert run(capsys, "certify", "--matrix", "type444", str(path))[0] == EXIT_CONFIG


def test_out_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for p in (a, b):
        assert main(["scan", "--matrix", "type444", "--length", "3", "--out", str(p)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes() and a.read_bytes()


def test_env_overrides(monkeypatch, capsys):
    monkeypatch.setenv("RGDLIN_MATRIX", "dihedral:inf")
    monkeypatch.setenv("RGDLIN_LENGTH", "3")
    code, recs, _ = run(capsys, "scan")
    assert code == EXIT_OK
    assert recs[0]["config"]["matrix"] == "dihedral:inf" and recs[0]["config"]["length"] == 3
    monkeypatch.setenv("RGDLIN_RADIUS", "many")
    assert run(capsys, "scan")[0] == EXIT_CONFIG


def test_matrix_and_gcm_files(tmp_path, capsys):
    m = tmp_path / "m.txt"
    m.write_text(CoxeterMatrix.type444().to_text())
    g = tmp_path / "gcm.txt"
    g.write_text("2 -1 -2\n-2 2 -1\n-1 -2 2\n")
    code, recs, _ = run(capsys, "interval", "--matrix", str(m), "--basis", f"gcm:{g}", "e : s", "e : t")
    assert code == EXIT_OK and recs[1]["basis"] == "gcm" and recs[1]["equal"]
    g.write_text("2 -1 -1\n-1 2 -1\n-1 -1 2\n")
    assert run(capsys, "interval", "--matrix", str(m), "--basis", f"gcm:{g}", "e : s", "e : t")[0] == EXIT_CONFIG


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "rgdlin", "interval", "--matrix", "dihedral:3", "e : s", "e : t"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout.splitlines()[1])["equal"]


def test_basis_file(tmp_path, capsys):
    from rgdlin.bases import sample_basis

    p = tmp_path / "basis.txt"
    p.write_text(sample_basis(CoxeterMatrix.universal(), 7).to_text())
    code, recs, _ = run(capsys, "interval", "--basis", f"file:{p}", "- e : r", "s : t")
    assert code == EXIT_OK and recs[1]["missing"] == ["e : s"]
    assert run(capsys, "interval", "--basis", f"file:{tmp_path / 'none'}", "- e : r", "s : t")[0] == EXIT_CONFIG
