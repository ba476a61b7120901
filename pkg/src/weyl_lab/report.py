"""Suite reports, tabular datasets and their CSV/JSON emission."""
import csv
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

from weyl_lab.exceptions import IoError

logger = logging.getLogger(__name__)

CASE_COLUMNS: Tuple[str, ...] = (
    "case",
    "invariant",
    "potential",
    "q",
    "p",
    "computed_re",
    "computed_im",
    "expected_re",
    "expected_im",
    "abs_residual",
    "rel_residual",
    "budget",
    "passed",
    "detail",
)


@dataclass(frozen=True)
class CaseRow:
    case: int
    invariant: str
    passed: bool
    computed: complex = 0j
    expected: complex = 0j
    abs_residual: float = 0.0
    rel_residual: float = 0.0
    budget: float = 0.0
    potential: str = ""
    q: str = ""
    p: str = ""
    detail: str = ""
    """Exception message of a failed computation."""

    def cells(self) -> Tuple[Any, ...]:
        return (
            self.case,
            self.invariant,
            self.potential,
            self.q,
            self.p,
            self.computed.real,
            self.computed.imag,
            self.expected.real,
            self.expected.imag,
            self.abs_residual,
            self.rel_residual,
            self.budget,
            self.passed,
            self.detail,
        )


@dataclass
class SuiteReport:
    name: str
    rows: List[CaseRow] = field(default_factory=list)
    wall_time: float = 0.0
    """Seconds spent; logged, never emitted."""

    @property
    def cases(self) -> int:
        return len(self.rows)

    @property
    def passes(self) -> int:
        return sum(1 for r in self.rows if r.passed)

    @property
    def passed(self) -> bool:
        return self.passes == self.cases

    @property
    def max_abs_residual(self) -> float:
        return max((r.abs_residual for r in self.rows), default=0.0)

    @property
    def max_rel_residual(self) -> float:
        return max((r.rel_residual for r in self.rows), default=0.0)

    def failures(self) -> List[CaseRow]:
        return [r for r in self.rows if not r.passed]

    def summary(self) -> Dict[str, Any]:
        return {
            "suite": self.name,
            "cases": self.cases,
            "passes": self.passes,
            "passed": self.passed,
            "max_abs_residual": _json_float(self.max_abs_residual),
            "max_rel_residual": _json_float(self.max_rel_residual),
        }

    def to_table(self) -> "Table":
        return Table(self.name, CASE_COLUMNS, [r.cells() for r in self.rows])


@dataclass
class Table:
    """A named dataset with a fixed header, e.g. a λ-plane scan."""

    name: str
    columns: Tuple[str, ...]
    rows: List[Tuple[Any, ...]] = field(default_factory=list)

    def records(self) -> List[Dict[str, Any]]:
        return [
            {c: _json_float(v) if isinstance(v, float) else v for c, v in zip(self.columns, row)} for row in self.rows
        ]


def format_cell(v: Any) -> str:
    """17 significant digits for floats, lower-case booleans."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_float(v: float) -> Any:
    # JSON has no inf/nan
    return v if math.isfinite(v) else str(v)


def _write(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        msg = f"cannot write {path}: {e}"
        raise IoError(msg) from e
    logger.debug(f"emit: wrote[{path}]")
    return path


def write_csv(table: Table, out_dir: Path) -> Path:
    path = Path(out_dir) / f"{table.name}.csv"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(table.columns)
            for row in table.rows:
                writer.writerow([format_cell(v) for v in row])
    except OSError as e:
        msg = f"cannot write {path}: {e}"
        raise IoError(msg) from e
    logger.debug(f"emit: wrote[{path}], rows[{len(table.rows)}]")
    return path


def write_json(payload: Any, path: Path) -> Path:
    return _write(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def emit(items: Sequence[Union[SuiteReport, Table]], fmt: str, out_dir: Path) -> List[Path]:
    """Write every report or dataset as ``<name>.csv`` and/or ``<name>.json``.

    JSON output of suite reports also writes ``summary.json``.
    """
    if fmt not in ("csv", "json", "both"):
        msg = f"format must be csv, json or both, got {fmt!r}"
        raise ValueError(msg)
    out_dir = Path(out_dir)
    written: List[Path] = []
    reports = [item for item in items if isinstance(item, SuiteReport)]
    for item in items:
        table = item.to_table() if isinstance(item, SuiteReport) else item
        if fmt in ("csv", "both"):
            written.append(write_csv(table, out_dir))
        if fmt in ("json", "both"):
            written.append(write_json(table.records(), out_dir / f"{table.name}.json"))
    if reports and fmt in ("json", "both"):
        summary = {
            "passed": all(r.passed for r in reports),
            "suites": [r.summary() for r in reports],
        }
        written.append(write_json(summary, out_dir / "summary.json"))
    return written
