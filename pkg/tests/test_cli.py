import json
import subprocess
import sys

import pytest

from mertens.cli import main, parse_int


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_int():
    assert parse_int("2^40") == 2**40
    assert parse_int("2**10") == 1024
    assert parse_int("1e9") == 10**9
    assert parse_int("7_766_842_813") == 7766842813


def test_mertens_json(capsys):
    code, out, _ = run(capsys, "mertens", "--x", "2^20", "--json", "--verify-nested")
    obj = json.loads(out)
    assert code == 0 and obj["M"] == 257 and obj["nested"]["ok"]


def test_mertens_text(capsys):
    code, out, _ = run(capsys, "mertens", "--x", "1000")
    assert code == 0 and out.startswith("M(1000) = 2")


def test_sieve_stdout(capsys):
    code, out, err = run(capsys, "sieve", "--limit", "1000", "--stride", "100")
    lines = [json.loads(l) for l in out.splitlines()]
    assert code == 0
    assert sum(1 for e in lines if e["kind"] == "zero") == 92
    assert json.loads(err)["M"] == 2


def test_sieve_file_then_zero_stats(capsys, tmp_path):
    ev = tmp_path / "ev.jsonl"
    code, out, _ = run(capsys, "sieve", "--limit", "10^5", "--stride", "10^4", "--out", str(ev))
    assert code == 0 and json.loads(out)["complete"]
    code, out, _ = run(capsys, "zero-stats", "--zeros", str(ev), "vcount", "--x", "10^4")
    assert json.loads(out)["V"] == 406
    code, out, _ = run(capsys, "zero-stats", "--zeros", str(ev), "positivity", "--x", "100")
    assert 0 < json.loads(out)["M_plus"] < 1
    code, out, _ = run(capsys, "zero-stats", "--zeros", str(ev), "gaps", "--m", "100", "--csv")
    assert out.startswith("g,count,P_g,multiplier\n")
    code, out, _ = run(capsys, "zero-stats", "band", "--g", "37")
    assert json.loads(out) == {"g": 37, "P_g": [2, 3], "multiplier": "12/7"}


def test_sieve_checkpoint_resume(capsys, tmp_path):
    ev, ck = str(tmp_path / "e.jsonl"), str(tmp_path / "c.bin")
    base = ["sieve", "--limit", "10^6", "--block-len", str(13860 * 8), "--out", ev, "--checkpoint", ck]
    code, out, _ = run(capsys, *base, "--halt-after", "2")
    assert code == 0 and not json.loads(out)["complete"]
    code, out, _ = run(capsys, *base, "--resume")
    assert json.loads(out)["complete"] and json.loads(out)["M"] == 212


def test_qtilde(capsys, tmp_path):
    code, out, _ = run(capsys, "qtilde", "--N", "200", "--x", "10^6", "--compare")
    obj = json.loads(out)
    assert code == 0 and abs(float(obj["q_tilde"]) - obj["q"]) < 0.2
    code, out, _ = run(capsys, "qtilde", "--N", "100", "--range", "1000", "10^5", "5")
    assert out.splitlines()[0] == "x,q_tilde" and len(out.splitlines()) == 6


def test_bounds_and_verify_cert(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "bounds", "--N", "6", "--nu", "32", "--eval-N", "100", "--out", str(cert))
    assert code == 0 and json.loads(out)["lll_verified"]
    code, out, _ = run(capsys, "verify-cert", str(cert))
    assert code == 0 and json.loads(out)["ok"]
    obj = json.loads(cert.read_text())
    obj["h_value"] = "-" + obj["h_value"].lstrip("-")
    cert.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "verify-cert", str(cert))
    assert code == 1


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--level", "quick", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["ok"]


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "mertens", "--x", "1000000", "--u", "10")[0] == 2
    assert run(capsys, "mertens", "--x", "2^60")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "verify-cert", str(bad))[0] == 3
    assert run(capsys, "zero-stats", "--zeros", str(tmp_path / "missing"), "vcount", "--x", "5")[0] == 3
    with pytest.raises(SystemExit) as e:
        main(["mertens", "--bogus"])
    assert e.value.code == 2


def test_console_script_help():
    r = subprocess.run([sys.executable, "-m", "mertens.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    for cmd in ("sieve", "mertens", "bounds", "qtilde", "zero-stats", "verify", "verify-cert"):
        assert cmd in r.stdout
