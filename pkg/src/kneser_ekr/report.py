"""Serialisation of suite results to JSON, CSV or plain-text tables."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from fractions import Fraction


def _clean(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, (float, Fraction)):
        x = float(value)
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return float(f"{x:.12g}")
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return str(value)


def build_report(command: str, config: dict, results: list[dict], failures: list[str],
                 seconds: float) -> dict:
    return {
        "command": command,
        "config": _clean(config),
        "results": _clean(results),
        "failures": list(failures),
        "timing": {"seconds": round(seconds, 3)},
    }


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def to_csv(report: dict) -> str:
    rows = report["results"]
    columns = sorted({key for row in rows for key in row})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buf.getvalue()


def to_text(report: dict) -> str:
    rows = report["results"]
    lines = [f"# {report['command']}"]
    if rows:
        columns = sorted({key for row in rows for key in row})
        cells = [[str(row.get(c, "")) for c in columns] for row in rows]
        widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
        lines.append("  ".join(c.rjust(w) for c, w in zip(columns, widths)))
        for r in cells:
            lines.append("  ".join(v.rjust(w) for v, w in zip(r, widths)))
    if report["failures"]:
        lines.append("FAILURES:")
        lines.extend(f"  - {f}" for f in report["failures"])
    else:
        lines.append("no failures")
    return "\n".join(lines) + "\n"


def emit_report(report: dict, fmt: str = "json", path: str = "-") -> None:
    """Write ``report`` in the requested format; ``path='-'`` means stdout."""
    text = {"json": to_json, "csv": to_csv, "text": to_text}[fmt](report)
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
