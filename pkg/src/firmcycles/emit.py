"""CSV and JSON writers with fixed 17-significant-digit floats."""

from __future__ import annotations

import csv
import io
import json
import math
from enum import Enum
from pathlib import Path

import numpy as np


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    if isinstance(v, Enum):
        return str(v.value)
    return str(v)


def to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    cols = list(rows[0])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r[c]) for c in cols])
    return buf.getvalue()


def to_json(obj, indent: int = 2) -> str:
    """json.dumps with every float written at 17 significant digits."""
    def enc(o, depth):
        pad, inner = " " * (indent * depth), " " * (indent * (depth + 1))
        if isinstance(o, Enum):
            o = o.value
        if isinstance(o, (bool, np.bool_)):
            return "true" if o else "false"
        if o is None:
            return "null"
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return format_float(float(o))
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{inner}{json.dumps(str(k))}: {enc(v, depth + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + pad + "}"
        if isinstance(o, (list, tuple, np.ndarray)):
            if len(o) == 0:
                return "[]"
            return "[\n" + ",\n".join(inner + enc(v, depth + 1) for v in o) + "\n" + pad + "]"
        raise TypeError(f"cannot serialise {type(o).__name__}")
    return enc(obj, 0) + "\n"


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
