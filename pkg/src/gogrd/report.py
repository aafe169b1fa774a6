"""Report serialization: one JSON document per run plus CSV curves."""

from __future__ import annotations

import csv
import io
import json
import math
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

TIMESTAMP_FIELD = "generated_at"


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj, key=repr)
    if isinstance(obj, tuple):
        return list(obj)
    return repr(obj)


def _clean(obj):
    # JSON has no infinities; None marks an unbounded constant
    if isinstance(obj, float) and (math.isinf(obj) or math.isnan(obj)):
        return None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def to_json(report, timestamp=None):
    doc = dict(_clean(report))
    if timestamp is not None:
        doc[TIMESTAMP_FIELD] = timestamp
    return json.dumps(doc, indent=2, sort_keys=True, default=_default) + "\n"


def strip_timestamp(text):
    doc = json.loads(text)
    doc.pop(TIMESTAMP_FIELD, None)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def curve_csv(curve):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "value", "witness"])
    for x, value, witness in curve.rows:
        if isinstance(value, float) and (math.isinf(value) or math.isnan(value)):
            value = ""
        w.writerow([_cell(x), _cell(value), "" if witness is None else witness])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (tuple, list)):
        return " ".join(str(x) for x in v)
    return "" if v is None else v


def write(result, out_dir, fmt="json", timestamp=True):
    """Write the report (and curves for csv/both); returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sid = result.report["scenario"]
    paths = []
    if fmt in ("json", "both"):
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if timestamp else None
        p = out / f"{sid}.json"
        p.write_text(to_json(result.report, stamp))
        paths.append(p)
    if fmt in ("csv", "both"):
        for curve in result.curves:
            p = out / f"{sid}.{curve.name}.csv"
            p.write_text(curve_csv(curve))
            paths.append(p)
    return paths


__all__ = ["to_json", "strip_timestamp", "curve_csv", "write", "TIMESTAMP_FIELD"]
