"""CSV and JSON output with lossless float formatting.

Every float is written with 17 significant digits (``'%.17g'``), which is
enough to round-trip any IEEE double.  Parsing a file written here and
writing it again therefore reproduces it byte for byte.
"""
from __future__ import annotations

import csv
import hashlib
import io as _io
import json
from pathlib import Path

import numpy as np

__all__ = ["fmt", "format_csv", "write_csv", "read_csv", "roundtrip_csv", "write_json", "sha256_file"]

AIRY_COLUMNS = ("re_z", "im_z", "re_val", "im_val")
GREEN_COLUMNS = ("x", "z", "re_G", "im_G", "re_dzG", "im_dzG")
EVANS_COLUMNS = ("re_c", "im_c", "re_W", "im_W", "abs_W")


def fmt(x) -> str:
    """17-significant-digit text for a real number."""
    return "%.17g" % float(x)


def format_csv(columns, rows) -> str:
    """CSV text (LF line endings) for an iterable of numeric rows."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    ncol = len(columns)
    for r in rows:
        if len(r) != ncol:
            raise ValueError(f"row has {len(r)} fields, expected {ncol}")
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def write_csv(path, columns, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(format_csv(columns, rows))
    return path


def read_csv(path):
    """Return (columns, data) with data a float array of shape (nrows, ncols)."""
    with open(path, newline="") as f:
        rd = csv.reader(f)
        columns = next(rd)
        data = [[float(v) for v in row] for row in rd]
    arr = np.array(data, float).reshape(len(data), len(columns))
    return columns, arr


def roundtrip_csv(path) -> bool:
    """True when parsing and re-emitting the file reproduces it exactly."""
    columns, data = read_csv(path)
    with open(path, newline="") as f:
        original = f.read()
    return format_csv(columns, data.tolist()) == original


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, (complex, np.complexfloating)):
        return {"re": float(o.real), "im": float(o.imag)}
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Path):
        return str(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(obj, f, indent=2, sort_keys=True, default=_default)
        f.write("\n")
    return path


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        h.update(f.read())
    return h.hexdigest()
