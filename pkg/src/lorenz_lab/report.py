"""Deterministic JSON and CSV output.

Reports are plain dicts; ``dumps`` normalizes them so identical inputs give
byte-identical text: keys sorted, floats printed with 12 significant digits,
Fractions as "p/q" strings, tuples as lists.
"""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

import numpy as np

SCHEMA = "lorenz-lab/1"
FLOAT_DIGITS = 12

__all__ = ["SCHEMA", "normalize", "dumps", "envelope", "csv_text"]


def _float(x: float):
    if math.isnan(x) or math.isinf(x):
        return str(x)
    v = float(f"{x:.{FLOAT_DIGITS}g}")
    return 0.0 if v == 0 else v  # no "-0.0"


def normalize(obj):
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, np.ndarray):
        return normalize(obj.tolist())
    if hasattr(obj, "to_json"):
        return normalize(obj.to_json())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(normalize(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def envelope(command: str, body: dict, config=None) -> dict:
    out = {"schema": SCHEMA, "command": command, "result": body}
    if config is not None:
        out["config"] = config
    return out


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(header), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for row in rows:
        w.writerow({k: "" if row.get(k) is None else row.get(k) for k in header})
    return buf.getvalue()
