"""CSV / JSON serialisation of Wigner grids and tabular series.

Every float is written with 17 significant digits, which round-trips IEEE
doubles exactly. Output is deterministic: same input, same bytes.

Wigner grid CSV: header ``x,p,w``; one row per node, x outer, p inner.

Wigner grid JSON::

    {"schema": "photonsub.wigner_grid/1",
     "metadata": {...},
     "x": [...], "p": [...],
     "values": [[W(x0,p0), W(x0,p1), ...], [W(x1,p0), ...], ...]}

``values`` is row-major with rows indexed by x.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .phase_space import WignerGrid

GRID_SCHEMA = "photonsub.wigner_grid/1"


def fmt(value) -> str:
    """17-significant-digit text for a float; nan for missing values."""
    if value is None:
        return "nan"
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _json(obj) -> str:
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else json.dumps(fmt(obj))
    return json.dumps(str(obj))


def grid_to_json(grid: WignerGrid) -> str:
    rows = ",\n    ".join(_json(row) for row in grid.values)
    return (
        "{\n"
        f'  "schema": {json.dumps(GRID_SCHEMA)},\n'
        f'  "metadata": {_json(grid.metadata)},\n'
        f'  "x": {_json(grid.x)},\n'
        f'  "p": {_json(grid.p)},\n'
        f'  "values": [\n    {rows}\n  ]\n'
        "}\n"
    )


def grid_to_csv(grid: WignerGrid) -> str:
    lines = ["x,p,w"]
    xs = [fmt(v) for v in grid.x]
    ps = [fmt(v) for v in grid.p]
    for i, xv in enumerate(xs):
        row = grid.values[i]
        lines.extend(f"{xv},{pv},{fmt(w)}" for pv, w in zip(ps, row))
    return "\n".join(lines) + "\n"


def write_grid(grid: WignerGrid, path: str | Path, fmt_name: str = "csv") -> Path:
    path = Path(path)
    text = grid_to_json(grid) if fmt_name == "json" else grid_to_csv(grid)
    path.write_text(text, encoding="utf-8", newline="\n")
    return path


def _metadata_value(v):
    if isinstance(v, str) and v in ("inf", "-inf", "nan"):
        return float(v)
    return v


def read_grid_json(path: str | Path) -> WignerGrid:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("schema") != GRID_SCHEMA:
        raise ValueError(f"unexpected schema {doc.get('schema')!r}")
    meta = {k: _metadata_value(v) for k, v in doc.get("metadata", {}).items()}
    return WignerGrid(np.array(doc["x"]), np.array(doc["p"]), np.array(doc["values"]), meta)


def read_grid_csv(path: str | Path) -> WignerGrid:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != "x,p,w":
        raise ValueError("missing 'x,p,w' header")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:] if ln.strip()])
    x = np.unique(data[:, 0])
    p = np.unique(data[:, 1])
    if x.size * p.size != data.shape[0]:
        raise ValueError("CSV rows do not form a complete rectangular grid")
    return WignerGrid(x, p, data[:, 2].reshape(x.size, p.size))


def table_to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def read_table_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:] if ln.strip()])
    return header, data.reshape(-1, len(header))
