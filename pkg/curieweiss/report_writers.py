"""CSV and JSON rendering for the command line"""

from __future__ import annotations

# Standard Library
import json
from collections.abc import Iterable, Sequence

# Third Party
import pandas as pd

from .verification_report import VerificationReport, json_safe

FLOAT_FORMAT = "%.17g"
SCHEMA_VERSION = 1


def render_csv(rows: Iterable[dict], columns: Sequence[str]) -> str:
    """Header plus one line per row, fixed column order, 17 significant digits."""
    frame = pd.DataFrame(list(rows), columns=list(columns))
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def render_rows_json(rows: Iterable[dict], columns: Sequence[str]) -> str:
    rows = [{column: json_safe(row.get(column)) for column in columns} for row in rows]
    excluded = sum(1 for row in rows if any(value is None for value in row.values()))
    return _dump({"schema_version": SCHEMA_VERSION, "columns": list(columns), "rows": rows, "excluded": excluded})


def render_reports_json(reports: Sequence[VerificationReport]) -> str:
    return _dump(
        {
            "schema_version": SCHEMA_VERSION,
            "passed": all(r.passed for r in reports),
            "excluded": sum(r.excluded for r in reports),
            "reports": [r.to_dict() for r in reports],
        }
    )


REPORT_COLUMNS = ("check_id", "passed", "status", "worst_case", "estimated_constant", "excluded", "grid")


def render_reports_csv(reports: Sequence[VerificationReport]) -> str:
    return render_csv(({c: r.to_dict()[c] for c in REPORT_COLUMNS} for r in reports), REPORT_COLUMNS)


def _dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, allow_nan=False, ensure_ascii=False) + "\n"
