"""Serialisation of run reports to JSON and CSV."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np


def to_plain(obj):
    """Convert numpy scalars/arrays and complex numbers to JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": to_plain(obj.real), "im": to_plain(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no inf/nan; keep them as strings so the body stays valid
        return x if math.isfinite(x) else repr(x)
    return obj


def report_json(report: dict) -> str:
    return json.dumps(to_plain(report), indent=2, sort_keys=True) + "\n"


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def iter_tables(report: dict):
    tables = report.get("results", {}).get("tables", {})
    for name in sorted(tables):
        yield name, tables[name]


def emit_report(report: dict, fmt: str, out_path) -> list[Path]:
    """Write the report under directory ``out_path``; returns the files written.

    ``json`` writes ``<scenario>.json``; ``csv`` writes one
    ``<scenario>_<table>.csv`` per table plus a ``<scenario>_checks.csv``.
    """
    out = Path(out_path)
    try:
        out.mkdir(parents=True, exist_ok=True)
        scenario = report["scenario"]
        if fmt == "json":
            path = out / f"{scenario}.json"
            path.write_text(report_json(report), encoding="utf-8")
            return [path]
        if fmt != "csv":
            raise ValueError(f"unknown format {fmt!r}")
        written = []
        tables = dict(iter_tables(report))
        tables["checks"] = {"columns": ["check", "passed"], "rows": sorted(report["checks"].items())}
        for name, table in tables.items():
            path = out / f"{scenario}_{name}.csv"
            with path.open("w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(table["columns"])
                for row in table["rows"]:
                    writer.writerow([_cell(v) for v in row])
            written.append(path)
        return written
    except OSError as exc:
        raise OSError(f"cannot write report to {out}: {exc.strerror or exc}") from exc
