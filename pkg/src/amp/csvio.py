"""Deterministic CSV output with a JSON sidecar for run metadata."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

import numpy as np

MAGIC = "# amp-csv v1"


def format_value(x) -> str:
    return "%.17g" % float(x)


def write_csv(path, columns: Sequence[str], data) -> Path:
    """Write ``data`` (rows x columns) after the magic line and a header row."""
    path = Path(path)
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[1] != len(columns):
        raise ValueError(f"data shape {data.shape} does not match {len(columns)} columns")
    lines = [MAGIC, ",".join(columns)]
    lines.extend(",".join(format_value(x) for x in row) for row in data)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_csv(path) -> tuple[list, np.ndarray]:
    with open(path) as fh:
        magic = fh.readline().rstrip("\n")
        if magic != MAGIC:
            raise ValueError(f"{path}: not an amp CSV file")
        columns = fh.readline().rstrip("\n").split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return columns, data


def grid_table(grids: Sequence[np.ndarray], values: np.ndarray) -> np.ndarray:
    """Flatten a 1- or 2-axis sweep into rows (x[, y], value), row-major."""
    mesh = np.meshgrid(*grids, indexing="ij")
    cols = [m.ravel() for m in mesh] + [np.asarray(values).ravel()]
    return np.column_stack(cols)


def write_meta(path, meta: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(meta, indent=2, sort_keys=True, default=_jsonable) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write_gnuplot(path, csv_name: str, columns: Sequence[str], surface: bool = False) -> Path:
    """Small convenience script: a heat map for a surface, line plots otherwise."""
    path = Path(path)
    lines = ["set datafile separator ','", f"set xlabel '{columns[0]}'"]
    if surface:
        lines += [
            f"set ylabel '{columns[1]}'",
            "set view map",
            f"splot '{csv_name}' skip 2 using 1:2:3 with pm3d title '{columns[2]}'",
        ]
    else:
        plots = [f"'{csv_name}' skip 2 using 1:{i + 1} with lines title '{c}'" for i, c in enumerate(columns[1:], 1)]
        lines.append("plot " + ", \\\n     ".join(plots))
    path.write_text("\n".join(lines) + "\n")
    return path
