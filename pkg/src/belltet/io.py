"""Readers and writers for the CSV, JSON and mesh outputs.

Floats are written with 17 significant digits so doubles round-trip exactly.
File writes go to a temporary sibling first and are renamed into place only
after the content is complete.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .qstate import BellDiagonalState

TRAJECTORY_COLUMNS = ("t", "c1", "c2", "c3", "c_l1", "c_re", "discord", "geo_discord")
CONTOUR_COLUMNS = ("polyline_id", "c1", "c2", "c3")
SEQUENCE_COLUMNS = ("index", "value_a", "value_b")


def fmt(x) -> str:
    return f"{float(x):.17g}"


def _plain(obj):
    """Convert numpy scalars/arrays and tuples into JSON-ready builtins."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(fmt(obj))
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def atomic_write(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, (int, np.integer)) else fmt(v) for v in row])
    return buf.getvalue()


def _read_csv(text: str, expected):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != tuple(expected):
        raise ValueError(f"expected header {','.join(expected)}")
    return rows[1:]


# states

def state_to_json(s: BellDiagonalState) -> str:
    return dumps(s.to_dict())


def state_from_json(text: str) -> BellDiagonalState:
    return BellDiagonalState.from_dict(json.loads(text))


def states_to_csv(states) -> str:
    return _csv_text(("c1", "c2", "c3"), [(s.c1, s.c2, s.c3) for s in states])


def states_from_csv(text: str) -> list[BellDiagonalState]:
    return [BellDiagonalState(*map(float, r)) for r in _read_csv(text, ("c1", "c2", "c3"))]


# trajectories

def trajectory_to_csv(traj) -> str:
    rows = []
    for sample in traj.samples:
        m = sample.measures
        rows.append((sample.t, *sample.state.c, m.c_l1, m.c_re, m.discord, m.geo_discord))
    return _csv_text(TRAJECTORY_COLUMNS, rows)


def trajectory_from_csv(text: str) -> np.ndarray:
    """Rows as an (n, 8) float array in TRAJECTORY_COLUMNS order."""
    return np.array(_read_csv(text, TRAJECTORY_COLUMNS), dtype=np.float64).reshape(-1, 8)


# ordering

def sequence_to_csv(report) -> str:
    rows = [(i, a, b) for i, (a, b) in enumerate(zip(report.values_a, report.values_b))]
    return _csv_text(SEQUENCE_COLUMNS, rows)


def sequence_from_csv(text: str) -> np.ndarray:
    return np.array(_read_csv(text, SEQUENCE_COLUMNS), dtype=np.float64).reshape(-1, 3)


# contours

def contours_to_csv(polylines) -> str:
    rows = []
    for k, line in enumerate(polylines):
        rows.extend((k, *p) for p in line)
    return _csv_text(CONTOUR_COLUMNS, rows)


def contours_from_csv(text: str) -> list[np.ndarray]:
    rows = _read_csv(text, CONTOUR_COLUMNS)
    lines: dict[int, list] = {}
    for r in rows:
        lines.setdefault(int(r[0]), []).append([float(x) for x in r[1:]])
    return [np.array(lines[k]) for k in sorted(lines)]


# meshes

def mesh_to_obj(mesh) -> str:
    out = [f"# level {fmt(mesh.level)}"]
    out += [f"v {fmt(x)} {fmt(y)} {fmt(z)}" for x, y, z in mesh.vertices]
    out += [f"f {i + 1} {j + 1} {k + 1}" for i, j, k in mesh.triangles]
    return "\n".join(out) + "\n"


def mesh_from_obj(text: str) -> tuple[np.ndarray, np.ndarray]:
    verts, faces = [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(x) - 1 for x in parts[1:4]])
    return np.array(verts, dtype=np.float64).reshape(-1, 3), np.array(faces, dtype=np.int64).reshape(-1, 3)


def mesh_sidecar(mesh, field) -> dict:
    return {
        "level": mesh.level,
        "dims": list(field.dims),
        "bounds": [list(b) for b in field.bounds],
        "n_vertices": int(len(mesh.vertices)),
        "n_triangles": int(len(mesh.triangles)),
    }
