"""CSV and JSON writers for result records."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Sequence

SIGNIFICANT = 12


def _number(x):
    if x is None:
        return None
    if isinstance(x, bool) or isinstance(x, int):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            return repr(x)
        return float(f"{x:.{SIGNIFICANT}g}")
    return x


def _text(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.{SIGNIFICANT}g}"
    return str(x)


def emit(records: Sequence[dict], fmt: str, fields: Sequence[str]) -> str:
    """Serialize ``records``; every record must carry exactly ``fields``."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        for rec in records:
            writer.writerow([_text(rec.get(f)) for f in fields])
        return buf.getvalue()
    if fmt == "json":
        rows = [{f: _number(rec.get(f)) for f in fields} for rec in records]
        return json.dumps(rows, indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
