"""Test suite reports and their CSV/JSON emission."""
import json
import math
from pathlib import Path

import pytest

from weyl_lab.exceptions import IoError
from weyl_lab.report import CASE_COLUMNS, CaseRow, SuiteReport, Table, emit, format_cell


def _report() -> SuiteReport:
    return SuiteReport(
        "reality",
        [
            CaseRow(0, "predicted", True, computed=1e-12 + 0j, abs_residual=1e-12, potential="zero"),
            CaseRow(1, "quadrature", False, computed=0.5j, expected=0.25j, abs_residual=0.25, rel_residual=1.0),
        ],
    )


def test_format_cell() -> None:
    """Test float precision and boolean spelling."""
    assert format_cell(0.1) == "0.10000000000000001"
    assert format_cell(True) == "true"
    assert format_cell(False) == "false"
    assert format_cell(3) == "3"
    assert format_cell("Γ") == "Γ"


def test_report_summary() -> None:
    """Test the pass counters and maxima."""
    report = _report()
    assert report.cases == 2
    assert report.passes == 1
    assert not report.passed
    assert report.failures() == [report.rows[1]]
    assert report.summary()["max_rel_residual"] == 1.0
    assert SuiteReport("empty").passed


def test_empty_table_csv(tmp_path: Path) -> None:
    """Test that an empty dataset still writes its header."""
    emit([Table("scan", ("a", "b"))], "csv", tmp_path)
    assert (tmp_path / "scan.csv").read_text(encoding="utf-8") == "a,b\n"


def test_emit_both(tmp_path: Path) -> None:
    """Test that both formats write one CSV and one JSON file per report plus the summary."""
    written = emit([_report()], "both", tmp_path)
    assert sorted(p.name for p in written) == ["reality.csv", "reality.json", "summary.json"]
    header = (tmp_path / "reality.csv").read_text(encoding="utf-8").splitlines()[0]
    assert tuple(header.split(",")) == CASE_COLUMNS
    summary = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
    assert summary["passed"] is False
    assert summary["suites"][0]["passes"] == 1
    records = json.loads((tmp_path / "reality.json").read_text(encoding="utf-8"))
    assert records[1]["passed"] is False


def test_emit_csv_has_no_summary(tmp_path: Path) -> None:
    """Test that CSV-only output writes no summary."""
    written = emit([_report()], "csv", tmp_path)
    assert [p.name for p in written] == ["reality.csv"]


def test_emit_is_byte_stable(tmp_path: Path) -> None:
    """Test that emitting the same report twice gives identical bytes."""
    emit([_report()], "both", tmp_path / "a")
    emit([_report()], "both", tmp_path / "b")
    for name in ("reality.csv", "reality.json", "summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_non_finite_json(tmp_path: Path) -> None:
    """Test that inf and nan are written as strings in JSON."""
    emit([Table("probe", ("tau", "value"), [(25.0, math.inf), (50.0, math.nan)])], "json", tmp_path)
    records = json.loads((tmp_path / "probe.json").read_text(encoding="utf-8"))
    assert records == [{"tau": 25.0, "value": "inf"}, {"tau": 50.0, "value": "nan"}]


def test_emit_errors(tmp_path: Path) -> None:
    """Test an unknown format and an unwritable output directory."""
    with pytest.raises(ValueError):
        emit([_report()], "xml", tmp_path)
    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")
    with pytest.raises(IoError):
        emit([_report()], "csv", blocker)
