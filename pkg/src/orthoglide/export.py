"""JSON / CSV / OBJ encodings of workspace and cube results.

Floats are written with ``repr`` (shortest round-trip form), so reading a
file back reproduces every endpoint bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import __version__
from .cube import CubeResult
from .workspace import WorkspaceResult

CSV_COLUMNS = ["x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"]


class ExportedWorkspace(NamedTuple):
    config: dict
    inside_lo: np.ndarray
    inside_hi: np.ndarray
    inside_volume: float
    error_index: float
    version: str


def _box_rows(lo: np.ndarray, hi: np.ndarray) -> list[dict]:
    return [
        {"x": [float(a[0]), float(b[0])], "y": [float(a[1]), float(b[1])], "z": [float(a[2]), float(b[2])]}
        for a, b in zip(lo, hi)
    ]


def workspace_to_json(result: WorkspaceResult, config: dict) -> dict:
    return {
        "version": __version__,
        "config": config,
        "inside": _box_rows(result.inside_lo, result.inside_hi),
        "inside_volume": result.inside_volume,
        "error_index": result.error_index,
        "boxes_processed": result.boxes_processed,
    }


def write_workspace(result: WorkspaceResult, path, fmt: str, config: dict) -> None:
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(workspace_to_json(result, config)))
    elif fmt == "csv":
        path.write_text(workspace_to_csv(result, config))
    elif fmt == "obj":
        path.write_text(boxes_to_obj(result.inside_lo, result.inside_hi, config))
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _meta(result: WorkspaceResult, config: dict) -> dict:
    return {
        "version": __version__,
        "config": config,
        "inside_volume": result.inside_volume,
        "error_index": result.error_index,
    }


def workspace_to_csv(result: WorkspaceResult, config: dict) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(_meta(result, config)) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for a, b in zip(result.inside_lo, result.inside_hi):
        w.writerow([repr(float(v)) for v in (a[0], b[0], a[1], b[1], a[2], b[2])])
    return buf.getvalue()


def boxes_to_obj(lo: np.ndarray, hi: np.ndarray, config: dict | None = None) -> str:
    """Each box as 8 vertices and 12 triangles."""
    lines = [f"# orthoglide {__version__}"]
    if config is not None:
        lines.append("# config " + json.dumps(config))
    faces = [
        (1, 3, 4), (1, 4, 2),  # x = lo
        (5, 6, 8), (5, 8, 7),  # x = hi
        (1, 2, 6), (1, 6, 5),  # y = lo
        (3, 7, 8), (3, 8, 4),  # y = hi
        (1, 5, 7), (1, 7, 3),  # z = lo
        (2, 4, 8), (2, 8, 6),  # z = hi
    ]
    for n, (a, b) in enumerate(zip(lo, hi)):
        for i in range(8):
            v = (b[0] if i & 4 else a[0], b[1] if i & 2 else a[1], b[2] if i & 1 else a[2])
            lines.append("v %r %r %r" % tuple(float(t) for t in v))
        base = 8 * n
        lines.extend("f %d %d %d" % (base + i, base + j, base + k) for i, j, k in faces)
    return "\n".join(lines) + "\n"


def read_workspace(path) -> ExportedWorkspace:
    """Load a JSON or CSV workspace file written by this package."""
    text = Path(path).read_text()
    if text.startswith("#"):
        header, _, body = text.partition("\n")
        meta = json.loads(header[1:])
        rows = list(csv.DictReader(io.StringIO(body)))
        arr = np.array([[float(r[c]) for c in CSV_COLUMNS] for r in rows]).reshape(-1, 6)
        lo, hi = arr[:, 0::2], arr[:, 1::2]
    else:
        meta = json.loads(text)
        boxes = meta["inside"]
        lo = np.array([[b["x"][0], b["y"][0], b["z"][0]] for b in boxes]).reshape(-1, 3)
        hi = np.array([[b["x"][1], b["y"][1], b["z"][1]] for b in boxes]).reshape(-1, 3)
    return ExportedWorkspace(meta["config"], lo, hi, meta["inside_volume"], meta["error_index"], meta["version"])


def cube_to_json(result: CubeResult, config: dict) -> dict:
    return {"version": __version__, "config": config, "cube": result.to_dict()}
