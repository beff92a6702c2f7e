"""Deterministic CSV/JSON serialization with atomic writes.

Every file opens with a metadata block: for CSV, a single ``# {json}``
comment line ahead of the column header; for JSON, a top-level ``meta`` key.
Floats are written with 12 significant digits.
"""
from __future__ import annotations

import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .channel import ChannelParams, QuadratureBatch

TOOL = "pecvqkd"


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return None if math.isnan(x) or math.isinf(x) else float(fmt(x))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def metadata(command: str, config: dict | None = None, **extra) -> dict:
    meta = {"tool": TOOL, "version": __version__, "command": command}
    if config is not None:
        meta["config"] = config
    meta.update(extra)
    return meta


def csv_text(columns: list[str], rows, meta: dict) -> str:
    lines = ["# " + json.dumps(jsonable(meta), sort_keys=True), ",".join(columns)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_text(path: str | Path | None, text: str) -> None:
    """Write ``text`` to ``path`` via temp file + rename, or to stdout if ``path`` is None."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(path: str | Path) -> tuple[dict, list[str], list[list[str]]]:
    """Returns (metadata, column names, raw string rows)."""
    meta: dict = {}
    header: list[str] | None = None
    rows = []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                if not meta:
                    meta = json.loads(line[1:].strip())
                continue
            if header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    return meta, header or [], rows


BATCH_COLUMNS = ["idx", "x_a", "x_b"]


def batch_csv(batch: QuadratureBatch, meta: dict) -> str:
    meta = {**meta, "batch": batch.header()}
    idx = np.arange(batch.n)
    return csv_text(BATCH_COLUMNS, zip(idx, batch.x_A, batch.x_B), meta)


def read_batch(path: str | Path) -> QuadratureBatch:
    meta, header, rows = read_csv(path)
    if header != BATCH_COLUMNS:
        raise ValueError(f"{path}: expected columns {BATCH_COLUMNS}, got {header}")
    data = np.array(rows, dtype=float).reshape(-1, 3)
    info = meta.get("batch", {})
    params = ChannelParams(**info["params"]) if info.get("params") else None
    batch = QuadratureBatch(data[:, 1], data[:, 2], float(info.get("k_true", 1.0)),
                            info.get("seed"), params)
    batch.meta["source_tap_variance"] = info.get("tap_variance")
    return batch
