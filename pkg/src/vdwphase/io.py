"""CSV and JSON writers with a fixed, deterministic format."""

import json
import math
from pathlib import Path

import numpy as np


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no infinities; keep them readable
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(obj):
    """Serialize with insertion-ordered keys, two-space indent, UTF-8 text."""
    return json.dumps(_clean(obj), indent=2, ensure_ascii=False) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj), encoding="utf-8")


def _fmt(x):
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    return format(float(x), ".17g")


def write_csv(path, header, columns):
    """Write equal-length columns with a header row and 17 significant digits."""
    cols = [list(c) for c in columns]
    n = len(cols[0]) if cols else 0
    if any(len(c) != n for c in cols):
        raise ValueError("columns must have equal length")
    lines = [",".join(header)]
    for i in range(n):
        lines.append(",".join(_fmt(c[i]) for c in cols))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
