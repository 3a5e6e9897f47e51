"""CSV and JSON-lines writers with a stable number format."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Iterable, Sequence, TextIO


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def csv_text(rows: Iterable[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float) and not math.isfinite(value):
        return fmt(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def jsonl_text(records: Iterable[dict]) -> str:
    return "".join(json.dumps(_jsonable(r), sort_keys=True) + "\n" for r in records)


def emit(text: str, path: str | None, stream: TextIO = sys.stdout) -> None:
    """Write to ``path``, or to ``stream`` when no path is given."""
    if path is None or path == "-":
        stream.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)
