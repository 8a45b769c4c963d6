"""Report documents: canonical JSON, aligned tables and CSV."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Sequence

from ..config import APP_NAME, APP_VERSION
from ..types import CheckReport

TABLE_COLUMNS = ("check_id", "status", "residual", "budget", "window", "elapsed_ms")


def version_string() -> str:
    return f"{APP_NAME} {APP_VERSION}"


def report_document(reports: Iterable[CheckReport], config: dict[str, Any]) -> dict[str, Any]:
    return {
        "version": version_string(),
        "config": dict(config),
        "checks": [r.to_dict() for r in reports],
    }


def dump_json(document: Any) -> str:
    """Canonical form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(document, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def _cell(report: CheckReport, column: str) -> str:
    if column == "window":
        return "" if report.window is None else f"[{report.window[0]}, {report.window[1]}]"
    value = getattr(report, column)
    return "" if value is None else str(value)


def format_table(reports: Sequence[CheckReport]) -> str:
    """Fixed-width table for humans; never parse it."""
    rows = [TABLE_COLUMNS] + [tuple(_cell(r, c) for c in TABLE_COLUMNS) for r in reports]
    widths = [max(len(row[i]) for row in rows) for i in range(len(TABLE_COLUMNS))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    passed, failed = summary(reports)
    lines.append(f"{passed} passed, {failed} failed")
    return "\n".join(lines) + "\n"


def format_csv(reports: Sequence[CheckReport]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("check_id", "status", "residual", "budget", "window_low", "window_high", "elapsed_ms"))
    for r in reports:
        low, high = r.window if r.window is not None else ("", "")
        writer.writerow((r.check_id, r.status, r.residual or "", r.budget or "", low, high, r.elapsed_ms))
    return buffer.getvalue()


def render(reports: Sequence[CheckReport], config: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return dump_json(report_document(reports, config))
    if fmt == "csv":
        return format_csv(reports)
    return format_table(reports)


def summary(reports: Iterable[CheckReport]) -> tuple[int, int]:
    passed = failed = 0
    for r in reports:
        if r.passed:
            passed += 1
        else:
            failed += 1
    return passed, failed


def write_report(path: str, text: str) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    return target
