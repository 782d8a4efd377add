"""CSV ingestion, result documents, and profile emission.

Result documents are a stable plain-text tree of keys and values with
fixed ordering, so identical runs produce byte-identical files and
diffs stay meaningful.  All writes go through a temp file and an atomic
rename.
"""

import csv
import os
import tempfile

import numpy as np

from .encode import Series
from .errors import EmptyFile, ParseError, RaggedRows
from .stability import SelectionProfile, bin_profile, smooth_profile


def _try_float(token: str):
    try:
        return float(token)
    except ValueError:
        return None


def ingest_csv(path) -> Series:
    """Read a rectangular CSV into a Series.

    An optional header row is detected when the first row is non-numeric
    but the remaining rows parse as numbers.  A single non-numeric column
    is treated as a categorical symbol series.
    """
    with open(path, newline="") as handle:
        rows = [row for row in csv.reader(handle) if row]
    if not rows:
        raise EmptyFile(f"{path} contains no data")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise RaggedRows(
                f"row {i + 1} has {len(row)} fields, expected {width}"
            )
    rows = [[f.strip() for f in row] for row in rows]

    header = None
    body = rows
    if len(rows) > 1 and any(_try_float(f) is None for f in rows[0]):
        if all(all(_try_float(f) is not None for f in row) for row in rows[1:]):
            header = rows[0]
            body = rows[1:]
    if not body:
        raise EmptyFile(f"{path} has a header but no data rows")

    numeric = all(_try_float(f) is not None for row in body for f in row)
    if numeric:
        data = np.empty((len(body), width), dtype=np.float64)
        for i, row in enumerate(body):
            for j, field in enumerate(row):
                value = _try_float(field)
                if value is None:  # unreachable after the scan, kept for safety
                    raise ParseError(
                        f"cannot parse {field!r} at line {i + 1}, column {j + 1}",
                        line=i + 1, column=j + 1,
                    )
                data[i, j] = value
        return Series(
            values=data, categorical=False,
            columns=tuple(header) if header else (),
        )
    if width != 1:
        for i, row in enumerate(body):
            for j, field in enumerate(row):
                if _try_float(field) is None:
                    raise ParseError(
                        f"non-numeric value {field!r} at line "
                        f"{i + 1 + (header is not None)}, column {j + 1}",
                        line=i + 1 + (header is not None), column=j + 1,
                    )
    symbols = np.array([row[0] for row in body], dtype=object)
    return Series(
        values=symbols, categorical=True,
        columns=tuple(header) if header else (),
    )


def _atomic_write(path, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_value(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))  # shortest exact round-trip
    if isinstance(value, (np.integer,)):
        return str(int(value))
    if isinstance(value, np.ndarray):
        return " ".join(format_value(v) for v in value.tolist())
    if isinstance(value, (list, tuple)):
        return " ".join(format_value(v) for v in value)
    return str(value)


def render_document(doc: dict, indent: int = 0) -> str:
    """Render a nested dict as an indented key-value tree, in insertion order."""
    lines = []
    pad = "  " * indent
    for key, value in doc.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_document(value, indent + 1))
        else:
            lines.append(f"{pad}{key}: {format_value(value)}")
    return "\n".join(lines)


def write_result_document(path, doc: dict):
    _atomic_write(path, render_document(doc) + "\n")


def emit_profile_plotdata(profile: SelectionProfile, path,
                          bin_width: int | None = None,
                          smooth_window: int | None = None):
    """Write (t, pi) rows; optional binned/smoothed companion files.

    Companions land next to ``path`` with ``.binned.csv`` and
    ``.smoothed.csv`` suffixes.  Values are written with full precision
    so a round-trip read reproduces the profile exactly.
    """
    lines = ["t,pi"]
    for t, value in enumerate(profile.pi, start=1):
        lines.append(f"{t},{format_value(float(value))}")
    _atomic_write(path, "\n".join(lines) + "\n")
    base = str(path)
    if base.endswith(".csv"):
        base = base[: -len(".csv")]
    if bin_width is not None:
        binned = bin_profile(profile, bin_width)
        lines = ["bin_start,bin_end,mass"]
        for start, value in zip(binned.starts, binned.values):
            end = min(int(start) + bin_width - 1, profile.n)
            lines.append(f"{start},{end},{format_value(float(value))}")
        _atomic_write(base + ".binned.csv", "\n".join(lines) + "\n")
    if smooth_window is not None:
        smoothed = smooth_profile(profile, smooth_window)
        lines = ["t,pi_smooth"]
        for t, value in enumerate(smoothed, start=1):
            lines.append(f"{t},{format_value(float(value))}")
        _atomic_write(base + ".smoothed.csv", "\n".join(lines) + "\n")


def read_profile_csv(path) -> np.ndarray:
    """Read back a (t, pi) file written by :func:`emit_profile_plotdata`."""
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    return np.array([float(row[1]) for row in rows[1:]])


def parse_config_file(path) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment; values stay strings."""
    out = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"expected key=value at line {lineno}", line=lineno)
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out
