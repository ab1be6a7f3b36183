"""CSV serialization of correlation traces.

Layout: '#'-prefixed comment lines carry the full scenario configuration
and any analysis metadata as flat ``key = value`` pairs, followed by one
header row naming the columns (t first) and one row per time sample.
Floats are written with 17 significant digits, so a parsed file
reproduces the in-memory doubles bit for bit and identical runs produce
byte-identical files.  Writes go through a temp file and an atomic
rename.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .analysis import CorrelationTrace

# fixed ordering of the standard columns; extras keep insertion order
COLUMN_ORDER = ("C", "D", "D_var", "I", "Q", "gA2", "gB2", "gA2_vol", "gB2_vol")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def ordered_columns(series: dict[str, np.ndarray]) -> list[str]:
    known = [c for c in COLUMN_ORDER if c in series]
    extras = [c for c in series if c not in COLUMN_ORDER]
    return known + extras


def write_trace_csv(path, trace: CorrelationTrace) -> None:
    """Write a trace atomically; metadata dict entries become '#' comments."""
    path = Path(path)
    cols = ordered_columns(trace.series)
    lines = ["# qubeat trace v1", "# time unit: 1/gamma0 (column t is gamma0*t)"]
    for key, value in trace.meta.items():
        lines.append(f"# {key} = {value}")
    lines.append("t," + ",".join(cols))
    data = [trace.series[c] for c in cols]
    for i, t in enumerate(trace.times):
        row = [_fmt(t)] + [_fmt(col[i]) for col in data]
        lines.append(",".join(row))
    payload = "\n".join(lines) + "\n"

    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_trace_csv(path) -> CorrelationTrace:
    """Parse a trace file written by write_trace_csv."""
    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, value = body.split("=", 1)
                    meta[key.strip()] = value.strip()
                continue
            if header is None:
                header = [c.strip() for c in line.split(",")]
                if not header or header[0] != "t":
                    raise ValueError(f"{path}: first column must be 't'")
                continue
            rows.append([float(x) for x in line.split(",")])
    if header is None or not rows:
        raise ValueError(f"{path}: no data rows found")
    arr = np.asarray(rows, dtype=float)
    if arr.shape[1] != len(header):
        raise ValueError(f"{path}: ragged rows")
    series = {name: arr[:, k + 1] for k, name in enumerate(header[1:])}
    return CorrelationTrace(times=arr[:, 0], series=series, meta=meta)
