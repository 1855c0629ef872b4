"""Plain-text CSV and binary PGM writers.

Number formatting is fixed so identical data always produces identical
bytes: the axis column uses 9 decimals, values 9 significant digits.
"""

from pathlib import Path

import numpy as np

from .errors import InvalidInputError

DISPLAY_RANGE_DB = 80.0


def _axis(x):
    return f"{x:.9f}"


def _value(x):
    return f"{x:#.9g}"


def _check_finite(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("refusing to write non-finite data")


def write_text(path, text):
    path = Path(path)
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def write_csv_series(x, values, path, x_name="t"):
    """Two-column CSV with header ``<x_name>,value``."""
    x = np.asarray(x, dtype=float)
    values = np.asarray(values, dtype=float)
    if x.shape != values.shape or x.ndim != 1:
        raise InvalidInputError("series axis and values must be 1-D and equal length")
    _check_finite(x, values)
    lines = [f"{x_name},value\n"]
    lines.extend(f"{_axis(a)},{_value(v)}\n" for a, v in zip(x.tolist(), values.tolist()))
    return write_text(path, "".join(lines))


def write_csv_columns(columns, path):
    """CSV with one named column per ``(name, values)`` pair; first column is the axis."""
    names = [name for name, _ in columns]
    arrays = [np.asarray(v, dtype=float) for _, v in columns]
    if len({a.shape for a in arrays}) != 1:
        raise InvalidInputError("all columns must have the same length")
    _check_finite(*arrays)
    fmts = [_axis] + [_value] * (len(arrays) - 1)
    lines = [",".join(names) + "\n"]
    for row in zip(*(a.tolist() for a in arrays)):
        lines.append(",".join(f(v) for f, v in zip(fmts, row)) + "\n")
    return write_text(path, "".join(lines))


def read_csv_series(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]


def write_csv_matrix(row_axis, col_axis, matrix, path, corner="velocity\\time"):
    """Matrix CSV: first row is ``col_axis``, first column ``row_axis``."""
    row_axis = np.asarray(row_axis, dtype=float)
    col_axis = np.asarray(col_axis, dtype=float)
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (len(row_axis), len(col_axis)):
        raise InvalidInputError(
            f"matrix shape {matrix.shape} inconsistent with axes "
            f"({len(row_axis)}, {len(col_axis)})"
        )
    _check_finite(row_axis, col_axis, matrix)
    lines = [corner + "," + ",".join(_axis(t) for t in col_axis.tolist()) + "\n"]
    for r, row in zip(row_axis.tolist(), matrix.tolist()):
        lines.append(_axis(r) + "," + ",".join(_value(v) for v in row) + "\n")
    return write_text(path, "".join(lines))


def read_csv_matrix(path):
    data = np.loadtxt(path, delimiter=",", dtype=str, ndmin=2)
    cols = data[0, 1:].astype(float)
    rows = data[1:, 0].astype(float)
    return rows, cols, data[1:, 1:].astype(float)


def heatmap_gray(matrix_db, display_range_db=DISPLAY_RANGE_DB):
    """8-bit gray levels over a window of ``display_range_db`` below the peak."""
    m = np.asarray(matrix_db, dtype=float)
    low = m.max() - display_range_db
    return np.rint(np.clip(255.0 * (m - low) / display_range_db, 0.0, 255.0)).astype(np.uint8)


def write_pgm_heatmap(matrix_db, path, display_range_db=DISPLAY_RANGE_DB):
    """Binary P5 PGM; rows are written top to bottom in matrix row order."""
    m = np.asarray(matrix_db, dtype=float)
    if m.ndim != 2 or m.size == 0:
        raise InvalidInputError("heatmap needs a non-empty 2-D matrix")
    _check_finite(m)
    gray = heatmap_gray(m, display_range_db)
    height, width = gray.shape
    path = Path(path)
    try:
        with open(path, "wb") as fh:
            fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
            fh.write(gray.tobytes())
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def read_pgm(path):
    raw = Path(path).read_bytes()
    magic, dims, maxval, body = raw.split(b"\n", 3)
    if magic != b"P5":
        raise InvalidInputError(f"{path} is not a binary PGM")
    width, height = map(int, dims.split())
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width)
