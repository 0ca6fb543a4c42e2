"""CSV emission and parsing.

Numbers are written with 17 significant digits so every float survives a
write/read round trip exactly. Files are written to a temporary sibling and
renamed into place.
"""
from __future__ import annotations

import csv
import os
import tempfile
from dataclasses import asdict

import numpy as np

from .grids import TimeGrid, Trajectory
from .pdelift import Field2D, SpaceTimeGrid


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def write_csv(path, header, rows, comments=()):
    """Atomically write `rows` under `header`, preceded by ``# `` comment lines."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            for line in comments:
                fh.write(f"# {line}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) for v in row])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(path):
    """Return ``(comments, header, rows)`` with rows as lists of strings."""
    comments, body = [], []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                comments.append(line[1:].strip())
            else:
                body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    return comments, header, list(reader)


def write_columns(path, names, columns, comments=()):
    write_csv(path, names, zip(*columns), comments)


def write_trajectory(path, traj: Trajectory, name="w"):
    grid = traj.grid
    comments = [f"t0={fmt(grid.t0)} dt={fmt(grid.dt)} n={grid.n}"]
    write_columns(path, ["t", name], [traj.t, traj.values], comments)


def read_trajectory(path) -> Trajectory:
    comments, _, rows = read_csv(path)
    meta = dict(kv.split("=") for kv in comments[0].split())
    grid = TimeGrid(float(meta["t0"]), float(meta["dt"]), int(meta["n"]))
    return Trajectory(grid, np.array([float(r[1]) for r in rows]))


def _grid_comment(g: SpaceTimeGrid) -> str:
    return " ".join(f"{k}={fmt(v)}" for k, v in asdict(g).items())


def write_field(path, field: Field2D, mask_path=None):
    """Write ``(x, t, w)`` triplets and, alongside, ``(x, t, mask)``."""
    g = field.grid
    xx, tt = np.meshgrid(g.x, g.t, indexing="ij")
    comments = [_grid_comment(g)]
    write_columns(path, ["x", "t", "w"], [xx.ravel(), tt.ravel(), field.values.ravel()],
                  comments)
    if mask_path is None:
        root, ext = os.path.splitext(os.fspath(path))
        mask_path = f"{root}_mask{ext}"
    write_columns(mask_path, ["x", "t", "mask"],
                  [xx.ravel(), tt.ravel(), field.mask.ravel().astype(int)], comments)
    return mask_path


def read_field(path, mask_path=None) -> Field2D:
    comments, _, rows = read_csv(path)
    meta = dict(kv.split("=") for kv in comments[0].split())
    g = SpaceTimeGrid(float(meta["x0"]), float(meta["dx"]), int(meta["nx"]),
                      float(meta["t0"]), float(meta["dt"]), int(meta["nt"]))
    values = np.array([float(r[2]) for r in rows]).reshape(g.nx, g.nt)
    if mask_path is None:
        root, ext = os.path.splitext(os.fspath(path))
        mask_path = f"{root}_mask{ext}"
    _, _, mrows = read_csv(mask_path)
    mask = np.array([r[2] == "1" for r in mrows]).reshape(g.nx, g.nt)
    return Field2D(g, values, mask)


REPORT_COLUMNS = ["source", "s1", "s2", "min_er", "max_er", "horizon", "dt", "optimized_flag"]


def report_row(rep) -> list:
    return [rep.source_tag, rep.s1, rep.s2, rep.min_er, rep.max_er, rep.horizon, rep.dt,
            rep.optimized]


def write_reports(path, reports):
    write_csv(path, REPORT_COLUMNS, [report_row(r) for r in reports])
