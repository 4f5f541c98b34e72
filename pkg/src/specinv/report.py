"""Machine-readable reports: per-check records, named series, canonical JSON,
and CSV emission.

The report body (everything except the per-record runtime_ms) is rendered as
canonical JSON, so identical configuration and seed reproduce it byte for
byte.
"""

import copy
import json

from .errors import UnknownSeries


def _plain(value):
    """Coerce numpy scalars/bools into plain Python types for stable JSON."""
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        try:
            return value.item()
        except (ValueError, TypeError):
            pass
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def record(name, anchor, status, measured=None, bound=None, tolerance=None,
           runtime_ms=None):
    if status not in ("pass", "fail", "info"):
        raise ValueError(f"bad status {status!r}")
    return {
        "name": str(name),
        "anchor": str(anchor),
        "status": status,
        "measured": _plain(measured),
        "bound": _plain(bound),
        "tolerance": _plain(tolerance),
        "runtime_ms": _plain(runtime_ms),
    }


def series(name, columns, rows):
    return {"name": str(name), "columns": [str(c) for c in columns],
            "rows": [[_plain(v) for v in row] for row in rows]}


def assemble(records, series_list, seed, config_echo, version):
    return {
        "version": str(version),
        "seed": int(seed),
        "config": _plain(config_echo),
        "records": list(records),
        "series": list(series_list),
        "failures": sum(1 for r in records if r["status"] == "fail"),
    }


def body_bytes(report):
    """Canonical JSON of the report with runtime_ms stripped (the determinism
    contract covers exactly this body)."""
    stripped = copy.deepcopy(report)
    for rec in stripped.get("records", []):
        rec.pop("runtime_ms", None)
    return json.dumps(stripped, sort_keys=True, indent=2).encode() + b"\n"


def write_report(report, path):
    with open(path, "w") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")


def find_series(report, name):
    for s in report.get("series", []):
        if s["name"] == name:
            return s
    raise UnknownSeries(f"series {name!r} not in report "
                        f"(have: {[s['name'] for s in report.get('series', [])]})")


def emit_csv(report, series_name, out_path):
    """Header row then full-precision rows, newline-terminated."""
    s = find_series(report, series_name)
    lines = [",".join(s["columns"])]
    for row in s["rows"]:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    with open(out_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return out_path
