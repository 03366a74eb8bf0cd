"""Machine-readable run reports.

Reports are plain JSON with a fixed top-level shape (schema_version, tool,
version, created_at, config, results, error).  Serialization uses a small
emitter instead of ``json.dumps`` because the stdlib encoder hardwires
``float.__repr__``; here every float is written with 17 significant digits,
which round-trips the IEEE double exactly and makes reruns byte-identical
apart from the timestamp.
"""
from __future__ import annotations

import json
import math
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from ._version import __version__

SCHEMA_VERSION = 1

#: Report fields that may differ between two otherwise identical runs.
VOLATILE_FIELDS = ("created_at",)


def _emit(value, pad: str, step: str) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return repr(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if not math.isfinite(x):
            return "null"
        return format(x, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        inner = pad + step
        parts = []
        for key, item in value.items():
            if not isinstance(key, str):
                raise TypeError(f"report keys must be strings, got {type(key).__name__}")
            parts.append(f"{inner}{json.dumps(key)}: {_emit(item, inner, step)}")
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        items = list(np.asarray(value).tolist()) if isinstance(value, np.ndarray) else list(value)
        if not items:
            return "[]"
        inner = pad + step
        parts = [f"{inner}{_emit(item, inner, step)}" for item in items]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(value).__name__} in a report")


def dump_report(report: dict) -> str:
    return _emit(report, "", "  ") + "\n"


def build_report(config: dict, results, error=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "fbst",
        "version": __version__,
        "created_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": config,
        "results": results,
        "error": error,
    }


def write_report(path, report: dict) -> None:
    Path(path).write_text(dump_report(report), encoding="utf-8")


def load_report(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    return json.loads(text)


def diff_reports(a, b, ignore=VOLATILE_FIELDS) -> list:
    """List paths where two reports disagree, ignoring volatile fields.

    Numbers must match exactly: a rerun with the same config and seeds is
    expected to reproduce every value bit for bit.
    """
    diffs = []
    _diff(a, b, "", set(ignore), diffs)
    return diffs


def _plain(value):
    """Normalize containers and numpy scalars so that a freshly computed
    result compares cleanly against its JSON round trip."""
    if isinstance(value, (tuple, np.ndarray)):
        return [_plain(v) for v in (value.tolist() if isinstance(value, np.ndarray) else value)]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def _diff(a, b, path, ignore, out):
    a = _plain(a)
    b = _plain(b)
    if isinstance(a, dict) and isinstance(b, dict):
        for key in list(a) + [k for k in b if k not in a]:
            if key in ignore:
                continue
            child = f"{path}.{key}" if path else key
            if key not in a:
                out.append(f"{child}: only in second report")
            elif key not in b:
                out.append(f"{child}: only in first report")
            else:
                _diff(a[key], b[key], child, ignore, out)
        return
    if isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            out.append(f"{path}: lengths differ ({len(a)} vs {len(b)})")
            return
        for i, (x, y) in enumerate(zip(a, b)):
            _diff(x, y, f"{path}[{i}]", ignore, out)
        return
    same = a == b
    if isinstance(a, bool) != isinstance(b, bool):
        same = False
    if not same:
        out.append(f"{path}: {a!r} != {b!r}")
