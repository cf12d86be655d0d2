"""Tabular report output shared by the command-line subcommands.

CSV reports open with ``#`` comment lines: the tool version, the resolved
run configuration and a summary (each as JSON).  Floats are written with
``repr`` so that values round-trip exactly.  Nothing time-dependent goes
into a report, which keeps reruns byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__

TOOL = "tmsreadout"


@dataclass
class Report:
    columns: tuple
    rows: list
    summary: dict = field(default_factory=dict)


def _plain(x):
    """Convert numpy scalars/arrays into JSON-native values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.generic):
        return x.item()
    return x


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def header_lines(config: dict, summary: dict | None = None) -> list[str]:
    lines = [f"# {TOOL} {__version__}", "# config: " + json.dumps(_plain(config), sort_keys=True)]
    if summary:
        lines.append("# summary: " + json.dumps(_plain(summary), sort_keys=True))
    return lines


def render_csv(report: Report, config: dict) -> str:
    buf = io.StringIO()
    for ln in header_lines(config, report.summary):
        buf.write(ln + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.columns)
    for row in report.rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_json(report: Report, config: dict) -> str:
    doc = {
        "header": {"tool": TOOL, "version": __version__, "config": config},
        "summary": report.summary,
        "columns": list(report.columns),
        "rows": [dict(zip(report.columns, row)) for row in report.rows],
    }
    return json.dumps(_plain(doc), indent=1, sort_keys=True) + "\n"


def write_report(report: Report, config: dict, fmt: str = "csv", path=None) -> None:
    """Write to ``path``, or to stdout when ``path`` is None."""
    text = render_json(report, config) if fmt == "json" else render_csv(report, config)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def read_csv_report(path) -> tuple[dict, list[dict]]:
    """Parse a CSV report back into (header, rows); values stay strings."""
    header = {}
    body = []
    for ln in Path(path).read_text().splitlines(keepends=True):
        if ln.startswith("# config: "):
            header["config"] = json.loads(ln[len("# config: "):])
        elif ln.startswith("# summary: "):
            header["summary"] = json.loads(ln[len("# summary: "):])
        elif ln.startswith(f"# {TOOL} "):
            header["version"] = ln.split()[2]
        elif not ln.startswith("#"):
            body.append(ln)
    return header, list(csv.DictReader(body))
