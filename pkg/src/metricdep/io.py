"""File formats: paired-sample CSV, square distance-matrix CSV, joint-law
JSON, and deterministic JSON/CSV emission.

Parse errors always name the offending row and column; numbers are rendered
at full precision (shortest round-trip decimal) so output documents diff
stably across runs.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .kernels import InputError
from .oracle import DiscreteJoint


def read_paired_sample(path):
    """Read a paired sample from CSV with header x_1..x_p,y_1..y_q.

    Returns (x, y) float arrays of shape (n, p) and (n, q).
    """
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise InputError(f"{path}: empty file, expected a header row x_1..x_p,y_1..y_q")
    header = [name.strip() for name in rows[0]]
    x_cols = [i for i, name in enumerate(header) if name.startswith("x")]
    y_cols = [i for i, name in enumerate(header) if name.startswith("y")]
    if not x_cols or not y_cols or len(x_cols) + len(y_cols) != len(header):
        raise InputError(
            f"{path}: header must name columns x_1..x_p then y_1..y_q, got {header}"
        )
    data = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InputError(
                f"{path}: row {r} has {len(row)} fields, expected {len(header)}"
            )
        values = []
        for c, cell in enumerate(row):
            try:
                values.append(float(cell))
            except ValueError:
                raise InputError(
                    f"{path}: row {r}, column {header[c]!r}: could not parse {cell.strip()!r}"
                ) from None
        data.append(values)
    if not data:
        raise InputError(f"{path}: no data rows")
    data = np.array(data)
    return data[:, x_cols], data[:, y_cols]


def read_square_matrix(path):
    """Read a headerless square numeric CSV matrix."""
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise InputError(f"{path}: empty file, expected a square numeric matrix")
    width = len(rows[0])
    out = np.empty((len(rows), width))
    for r, row in enumerate(rows, start=1):
        if len(row) != width:
            raise InputError(
                f"{path}: row {r} has {len(row)} fields, expected {width} (ragged matrix)"
            )
        for c, cell in enumerate(row, start=1):
            try:
                out[r - 1, c - 1] = float(cell)
            except ValueError:
                raise InputError(
                    f"{path}: row {r}, column {c}: could not parse {cell.strip()!r}"
                ) from None
    if out.shape[0] != out.shape[1]:
        raise InputError(f"{path}: matrix is {out.shape[0]}x{out.shape[1]}, expected square")
    return out


def read_discrete_joint(path) -> DiscreteJoint:
    """Read a finite-support joint law from a JSON document
    {"support_x": [[...]], "support_y": [[...]], "P": [[...]]}."""
    with open(path) as handle:
        text = handle.read()
    return DiscreteJoint.from_json(text)


def _plain(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def render_json(doc) -> str:
    """Deterministic JSON: sorted keys, full-precision floats, newline-terminated."""
    return json.dumps(_plain(doc), sort_keys=True) + "\n"
