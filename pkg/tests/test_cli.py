import csv
import io
import json

import pytest

from unitlat import cli
from unitlat import verifier as vf


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_fund_unit_text(capsys):
    code, out, _ = run(capsys, "fund-unit", "5")
    assert code == 0
    assert "(1/2) + (1/2)*sqrt(5)" in out
    assert "0.481211825060" in out


def test_fund_unit_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "fund-unit", "7")
    assert code == 0
    payload = json.loads(out)
    assert payload["unit"] == {"d": 7, "a": "8", "b": "3"}
    assert payload["norm_sign"] == 1


def test_fund_unit_invalid(capsys):
    code, out, err = run(capsys, "fund-unit", "4")
    assert code == 2
    assert out == ""
    assert "squarefree" in err


def test_klein_text_and_json(capsys):
    code, out, _ = run(capsys, "klein", "2", "5")
    assert code == 0
    assert "index over +-E: 2" in out
    assert "1.69650956948" in out
    code, out, _ = run(capsys, "--format", "json", "klein", "5", "13")
    payload = json.loads(out)
    assert payload["index_over_E"] == 2
    assert payload["min_1norm"] == "2.29973675322"
    assert payload["certified"] is True


def test_klein_invalid_pairs(capsys):
    assert run(capsys, "klein", "4", "5")[0] == 2
    assert run(capsys, "klein", "5", "5")[0] == 2


def test_cyclic_ok(capsys):
    code, out, _ = run(capsys, "cyclic", "Q(sqrt(2+sqrt2))")
    assert code == 0
    assert "parity constraint: n1+n2+n3 even" in out
    assert "6.40402796326" in out
    assert "[ok]" in out and "FAIL" not in out


def test_cyclic_unknown_label(capsys):
    code, _, err = run(capsys, "cyclic", "nope")
    assert code == 2
    assert "nope" in err


def test_cyclic_corrupted_entry(tmp_path, capsys):
    catalog = vf.load_default_catalog()
    obj = catalog[0].to_json()
    obj["u_star"] = ["1", "2", "0", "0"]  # not a unit
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([obj]))
    code, out, err = run(capsys, "--catalog", str(path),
                         "cyclic", catalog[0].label)
    assert code == 4
    assert "FAIL" in out
    assert "u_star" in err


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "--scan-limit", "6", "scan")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [tuple(r) for r in csv.reader(io.StringIO(out))][0] == (
        "d1", "d2", "d3", "index", "min_1norm", "certified",
        "bound_8X3", "theorem_margin")
    assert [(int(r["d1"]), int(r["d2"])) for r in rows] == [
        (2, 3), (2, 5), (2, 6), (3, 5), (3, 6), (5, 6)]
    for r in rows:
        assert r["certified"] == "True"
        assert float(r["theorem_margin"]) > 0


def test_scan_byte_stable(capsys):
    _, out1, _ = run(capsys, "--scan-limit", "6", "scan")
    _, out2, _ = run(capsys, "--scan-limit", "6", "scan")
    assert out1 == out2


def test_scan_env_and_flag_precedence(capsys, monkeypatch):
    monkeypatch.setenv("UNITLAT_SCAN_LIMIT", "6")
    _, out, _ = run(capsys, "scan")
    assert len(out.splitlines()) == 7  # header + 6 rows
    _, out, _ = run(capsys, "--scan-limit", "5", "scan")
    assert len(out.splitlines()) == 4  # pairs of {2, 3, 5}


def test_bad_env_value(capsys, monkeypatch):
    monkeypatch.setenv("UNITLAT_PRECISION", "lots")
    assert run(capsys, "fund-unit", "5")[0] == 2


def test_config_validation(capsys):
    assert run(capsys, "--precision", "32", "fund-unit", "5")[0] == 2
    assert run(capsys, "--coeff-bound", "0", "klein", "2", "5")[0] == 2


def test_verify_paper_exit_codes(capsys, monkeypatch):
    monkeypatch.setattr(vf, "verify_paper",
                        lambda **kw: {"ok": True, "violations": [],
                                      "checks": [], "scan": []})
    assert run(capsys, "verify-paper")[0] == 0
    monkeypatch.setattr(vf, "verify_paper",
                        lambda **kw: {"ok": False, "violations": ["x"],
                                      "checks": [], "scan": []})
    code, out, _ = run(capsys, "verify-paper")
    assert code == 1
    assert "VIOLATIONS: x" in out


def test_verify_paper_json_shape(capsys, monkeypatch):
    monkeypatch.setattr(
        vf, "verify_paper",
        lambda **kw: {"ok": True, "violations": [], "scan": [],
                      "checks": [{"name": "c", "relation": "holds"}]})
    code, out, _ = run(capsys, "--format", "json", "verify-paper")
    assert code == 0
    assert json.loads(out)["checks"][0]["name"] == "c"
