"""Plain-text formats for clouds, labelled grids, meshes, profiles and results.

Clouds hold one point per line, coordinates separated by whitespace or
commas, ``#`` starting a comment. Grids add a trailing 0/1 label column.
Numbers are written in their shortest round-trip form (at most 17
significant digits) so a save/load round trip is exact. Comment lines of
the form ``# key=value`` carry metadata (``epsilon`` for grids,
``truncated_at`` for profiles).
"""

from __future__ import annotations

import json
import math
import re

import numpy as np

from .beta_reach import BetaReachProfile, TriangleMesh
from .core import point_cloud
from .rconv_bound import LabeledGrid

__all__ = [
    "load_cloud",
    "save_cloud",
    "load_grid",
    "save_grid",
    "load_off",
    "save_off",
    "load_profile",
    "save_profile",
    "save_json",
    "fmt",
]

_SPLIT = re.compile(r"[,\s]+")
_META = re.compile(r"#\s*([A-Za-z_]+)\s*=\s*(\S+)")


def fmt(v):
    """Shortest text that reads back to the same float; ``inf``/``-inf`` for infinities."""
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def _read_rows(path):
    rows, meta = [], {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            m = _META.match(line.strip())
            if m:
                meta[m.group(1)] = m.group(2)
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                rows.append([float(t) for t in _SPLIT.split(line) if t])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a numeric row: {line!r}") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    width = len(rows[0])
    for k, r in enumerate(rows):
        if len(r) != width:
            raise ValueError(f"{path}: row {k + 1} has {len(r)} columns, expected {width}")
    return np.array(rows), meta


def _write_rows(path, rows):
    with open(path, "w") as fh:
        for r in rows:
            fh.write(" ".join(fmt(v) for v in r) + "\n")


def load_cloud(path, dedupe=True):
    """Read a point cloud; the dimension is the width of the first data row."""
    rows, _ = _read_rows(path)
    return point_cloud(rows, dedupe=dedupe)


def save_cloud(path, points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    _write_rows(path, pts)


def load_grid(path):
    """Read a labelled grid: coordinates then a 0/1 label on each line."""
    rows, meta = _read_rows(path)
    if rows.shape[1] < 2:
        raise ValueError(f"{path}: grid rows need coordinates and a label")
    lab = rows[:, -1]
    if not np.all((lab == 0) | (lab == 1)):
        raise ValueError(f"{path}: labels must be 0 or 1")
    eps = float(meta["epsilon"]) if "epsilon" in meta else None
    return LabeledGrid(rows[:, :-1], lab.astype(bool), eps)


def save_grid(path, grid):
    with open(path, "w") as fh:
        if grid.epsilon is not None:
            fh.write(f"# epsilon={fmt(grid.epsilon)}\n")
        for p, lab in zip(grid.phi, grid.inside):
            fh.write(" ".join(fmt(c) for c in p) + f" {int(lab)}\n")


def load_off(path):
    """Read an OFF mesh; polygonal faces are fan-triangulated."""
    with open(path) as fh:
        toks = []
        for line in fh:
            line = line.split("#", 1)[0].split()
            toks.extend(line)
    if not toks or toks[0] != "OFF":
        raise ValueError(f"{path}: missing OFF header")
    nv, nf = int(toks[1]), int(toks[2])
    pos = 4
    verts = np.array(toks[pos:pos + 3 * nv], dtype=float).reshape(nv, 3)
    pos += 3 * nv
    faces = []
    for _ in range(nf):
        k = int(toks[pos])
        faces.append([int(t) for t in toks[pos + 1:pos + 1 + k]])
        pos += 1 + k
    return TriangleMesh.from_faces(verts, faces)


def save_off(path, mesh):
    with open(path, "w") as fh:
        fh.write("OFF\n")
        fh.write(f"{len(mesh.vertices)} {len(mesh.triangles)} 0\n")
        for v in mesh.vertices:
            fh.write(" ".join(fmt(c) for c in v) + "\n")
        for t in mesh.triangles:
            fh.write(f"3 {t[0]} {t[1]} {t[2]}\n")


def save_profile(path, p):
    """CSV ``beta,value``: one row per step start, then ``beta_max,inf`` closing the last step."""
    with open(path, "w") as fh:
        if p.truncated_at is not None:
            fh.write(f"# truncated_at={fmt(p.truncated_at)}\n")
        fh.write("beta,value\n")
        for b, v in zip(p.beta, p.value):
            fh.write(f"{fmt(b)},{fmt(v)}\n")
        fh.write(f"{fmt(p.beta_max)},inf\n")


def load_profile(path):
    rows, meta = [], {}
    with open(path) as fh:
        for line in fh:
            s = line.strip()
            m = _META.match(s)
            if m:
                meta[m.group(1)] = m.group(2)
            s = s.split("#", 1)[0].strip()
            if not s or s.lower().startswith("beta"):
                continue
            b, v = s.split(",")
            rows.append((float(b), float(v)))
    if len(rows) < 2 or not np.isinf(rows[-1][1]):
        raise ValueError(f"{path}: a profile needs its steps and a closing 'beta_max,inf' row")
    beta = np.array([r[0] for r in rows[:-1]])
    value = np.array([r[1] for r in rows[:-1]])
    beta_max = rows[-1][0]
    trunc = float(meta["truncated_at"]) if "truncated_at" in meta else None
    return BetaReachProfile(beta, value, float(beta_max), trunc)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return fmt(v) if math.isinf(v) else v
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def save_json(path, obj):
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=False)
        fh.write("\n")
