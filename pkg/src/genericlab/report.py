"""Experiment reports: rows of exact values with pass/fail, and renderers."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .rationals import dec, fmt


def _cell(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, Fraction):
        return fmt(v)
    if isinstance(v, (list, tuple)):
        return [_cell(x) for x in v]
    if isinstance(v, float):
        return float(f"{v:.12g}")
    return v


def make_row(**values):
    """Row dict; every Fraction ``x`` also gets an ``x_decimal`` column."""
    row = {}
    for k, v in values.items():
        row[k] = _cell(v)
        if isinstance(v, Fraction):
            row[k + "_decimal"] = dec(v)
    return row


@dataclass
class Report:
    command: str
    config: dict
    rows: list = field(default_factory=list)

    def add(self, passed, **values):
        r = make_row(**values)
        r["pass"] = bool(passed)
        self.rows.append(r)

    @property
    def failed(self):
        return sum(1 for r in self.rows if not r["pass"])

    def summary(self):
        return {
            "summary": True,
            "command": self.command,
            "config": {k: _cell(v) for k, v in sorted(self.config.items())},
            "rows": len(self.rows),
            "passed": len(self.rows) - self.failed,
            "failed": self.failed,
        }


def _columns(rows):
    cols = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def _text(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return " ".join(_text(x) for x in v)
    if v is None:
        return ""
    return str(v)


def render_jsonl(report):
    lines = [json.dumps(r, sort_keys=False) for r in report.rows]
    lines.append(json.dumps(report.summary()))
    return "\n".join(lines) + "\n"


def render_csv(report):
    cols = _columns(report.rows) or ["pass"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in report.rows:
        w.writerow([_text(r.get(c)) for c in cols])
    return buf.getvalue()


def render_table(report):
    cols = _columns(report.rows) or ["pass"]
    cells = [[_text(r.get(c)) for c in cols] for r in report.rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(cols)]
    out = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    out += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(out) + "\n"


RENDERERS = {"jsonl": render_jsonl, "csv": render_csv, "table": render_table}


def report_render(report, fmt_name="table"):
    return RENDERERS[fmt_name](report)
