import csv
import io
import json

import pytest

from sturmspec.cli import main
from sturmspec.suites import closed_form_edges


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bands_count(capsys):
    code, out, _ = run(capsys, "bands", "--cf", "1,1,1", "--V", "1")
    assert code == 0
    assert len(json.loads(out)["bands"]) == 3


def test_bands_rational_edges(capsys):
    code, out, _ = run(capsys, "bands", "--rat", "1/2", "--V", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    two, _ = closed_form_edges(1.0)
    assert code == 0 and len(rows) == 2
    for r, (a, b) in zip(rows, two):
        assert float(r["left"]) == pytest.approx(a, abs=1e-10)
        assert float(r["right"]) == pytest.approx(b, abs=1e-10)


def test_bands_is_byte_stable(capsys):
    a = run(capsys, "bands", "--preset", "silver", "--depth", "4", "--V", "2.5")[1]
    b = run(capsys, "bands", "--preset", "silver", "--depth", "4", "--V", "2.5")[1]
    assert a == b


def test_zero_coupling_is_usage_error(capsys):
    code, _, err = run(capsys, "bands", "--cf", "1", "--V", "0")
    assert code == 2 and "error" in err


def test_missing_alpha(capsys):
    assert run(capsys, "bands", "--V", "1")[0] == 2


def test_unknown_suite(capsys):
    assert run(capsys, "verify", "nonsense")[0] == 2


def test_butterfly_rows(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert run(capsys, "butterfly", "--preset", "golden", "--depth", "4", "--V-grid", "0.5:4:5", "--out", str(out))[0] == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 5 * sum((1, 1, 2, 3, 5))  # q_k for k = 0..4
    assert {r["type"] for r in rows} <= {"A", "B", ""}


def test_butterfly_empty_and_single(tmp_path, capsys):
    empty = tmp_path / "e.csv"
    assert run(capsys, "butterfly", "--preset", "golden", "--V-grid", "1:2:0", "--out", str(empty))[0] == 0
    assert empty.read_text() == ""
    code, out, _ = run(capsys, "butterfly", "--preset", "golden", "--depth", "3", "--V-grid", "2:2:1")
    assert {r["V"] for r in csv.DictReader(io.StringIO(out))} == {"2"}


def test_butterfly_svg(tmp_path, capsys):
    svg = tmp_path / "b.svg"
    assert run(capsys, "butterfly", "--preset", "golden", "--depth", "3", "--V-grid", "0.5:3:4", "--out", str(svg))[0] == 0
    text = svg.read_text()
    assert text.startswith("<svg") and "#1f6fb4" in text and "#d0342c" in text


def test_verify_dry_tmp(capsys):
    code, out, _ = run(capsys, "verify", "dry-tmp", "--V", "1", "--k", "10", "--L", "5")
    assert code == 0 and out.strip().endswith("pass")


def test_verify_words(capsys):
    code, out, _ = run(capsys, "verify", "words")
    assert code == 0 and "[PASS]" in out
