"""CSV/JSON readers and writers used by the command line.

All writers go through ``atomic_write`` so a failed run never leaves a
partial output file behind.
"""
from __future__ import annotations

import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from .errors import ValidationError

GRID_ORDER_NOTE = "# axis-major order, last axis fastest"


def read_series(path: str | os.PathLike) -> np.ndarray:
    """One sample per line (first column); an optional non-numeric header is skipped."""
    values = []
    seen_row = False
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                continue
            cell = row[0].strip()
            try:
                v = float(cell)
            except ValueError:
                if not seen_row:
                    seen_row = True
                    continue
                raise ValidationError(f"{path}:{lineno}: not a number: {cell!r}") from None
            seen_row = True
            if not np.isfinite(v):
                raise ValidationError(f"{path}:{lineno}: non-finite value {cell!r}")
            values.append(v)
    if not values:
        raise ValidationError(f"{path}: no samples")
    return np.array(values)


def atomic_write(path: str | os.PathLike | None, text: str) -> None:
    """Write text to ``path`` via a temp file and rename; ``None`` or '-' means stdout."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent or ".")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v: float) -> str:
    return repr(float(v))


def series_csv(x: np.ndarray) -> str:
    return "x\n" + "".join(_fmt(v) + "\n" for v in x)


def grid_csv(points: np.ndarray, values: np.ndarray, names: list[str] | None = None,
             value_name: str = "value") -> str:
    n = points.shape[1]
    names = names or [f"x{i + 1}" for i in range(n)]
    buf = io.StringIO()
    buf.write(GRID_ORDER_NOTE + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*names, value_name])
    for p, v in zip(points, values):
        w.writerow([*(_fmt(a) for a in p), _fmt(v)])
    return buf.getvalue()


def spectral_csv(points: np.ndarray, values: np.ndarray) -> str:
    n = points.shape[1]
    buf = io.StringIO()
    buf.write(GRID_ORDER_NOTE + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*(f"w{i + 1}" for i in range(n)), "real", "imag", "magnitude"])
    for p, v in zip(points, values):
        w.writerow([*(_fmt(a) for a in p), _fmt(v.real), _fmt(v.imag), _fmt(abs(v))])
    return buf.getvalue()


def read_grid_csv(path: str | os.PathLike) -> tuple[list[str], np.ndarray]:
    """Inverse of ``grid_csv``/``spectral_csv``: header names and a float array."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header, body = rows[0], rows[1:]
    return header, np.array([[float(c) for c in r] for r in body])


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
