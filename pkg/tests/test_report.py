"""Serialization of run reports: canonical JSON, CSV rows, console text."""

import csv
import io
import json

from qes.report import CheckResult, RunReport, SectorRecord, report_csv, report_json, render_text, summarize_checks


def _sample_report():
    return RunReport(
        system="demo",
        params={"n": 1, "k": 0.5},
        sectors=(
            SectorRecord(
                gauge="f1",
                dim=2,
                residual=1e-15,
                eigenvalues=(0.5, 4.25),
                matched=(0.5000001, 4.2500002),
                errors=(1e-7, 2e-7),
            ),
        ),
        reference_grid=256,
        reference=(0.5000001, 4.2500002, 9.0),
        checks=(
            CheckResult("count", True, "2 of 2"),
            CheckResult("residuals", True, "max 1e-15"),
        ),
        wall_time=1.234,
    )


def test_json_schema_keys():
    doc = json.loads(report_json(_sample_report()))
    assert sorted(doc) == ["checks", "params", "reference", "sectors", "system"]
    assert doc["reference"]["grid"] == 256
    assert doc["sectors"][0]["gauge"] == "f1"
    assert sorted(doc["sectors"][0]) == ["dim", "eigenvalues", "gauge", "residual"]
    assert doc["checks"][0] == {"name": "count", "pass": True, "detail": "2 of 2"}


def test_json_excludes_wall_time():
    text = report_json(_sample_report())
    assert "wall" not in text and "1.234" not in text


def test_json_is_canonical():
    a = report_json(_sample_report())
    b = report_json(_sample_report())
    assert a == b
    assert a.endswith("\n")
    # keys are emitted sorted so byte identity survives dict construction order
    assert a.index('"checks"') < a.index('"params"') < a.index('"system"')


def test_csv_rows():
    text = report_csv(_sample_report())
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["system", "sector", "index", "eigenvalue", "matched_reference", "abs_error"]
    assert len(rows) == 3
    assert rows[1][:3] == ["demo", "f1", "0"]
    assert float(rows[1][3]) == 0.5
    assert float(rows[2][5]) == 2e-7


def test_all_pass_flag():
    r = _sample_report()
    assert r.all_pass()
    bad = RunReport(
        system="demo",
        params={},
        sectors=(),
        checks=(CheckResult("x", False, "boom"),),
    )
    assert not bad.all_pass()


def test_render_text_mentions_checks():
    text = render_text(_sample_report())
    assert "demo" in text
    assert "pass" in text.lower()


def test_summarize_checks_counts():
    out = summarize_checks(
        [CheckResult("a", True, ""), CheckResult("b", False, "bad"), CheckResult("c", True, "")]
    )
    assert "2/3" in out
    assert "FAIL" in out
