"""Deterministic result emission: JSON with 17-digit floats, CSV, raw field dumps."""

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return _float_text(x) if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number, bool)) or v is None for v in obj):
            return "[" + ", ".join(_encode(v, indent, level) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "to_dict"):
        return _encode(obj.to_dict(), indent, level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _float_text(x):
    text = format(x, ".17g")
    return text if any(ch in text for ch in ".en") else text + ".0"


def dumps(obj, indent=2):
    """JSON text with insertion-ordered keys and floats at 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


def with_schema(payload):
    out = {"schemaVersion": SCHEMA_VERSION}
    out.update(payload)
    return out


def atomic_write(path, data):
    """Write text or bytes to ``path`` through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, (bytes, bytearray)) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return _float_text(float(v))
    return v


def field_csv(phi):
    """Grid coordinates followed by ``f`` and ``g`` columns."""
    grid = phi.grid
    from .field import coordinates

    if grid.radial_mode:
        cols, names = [coordinates(grid)], ["r"]
    else:
        cols = [x.ravel() for x in coordinates(grid)]
        names = ["x", "y", "z"][: grid.d]
    cols += [phi.f.ravel(), phi.g.ravel()]
    return csv_text(names + ["f", "g"], zip(*cols))


def write_field_dump(prefix, phi):
    """Raw little-endian float64 blocks ``f`` then ``g`` plus a JSON header."""
    prefix = Path(prefix)
    header = with_schema(
        {
            "grid": phi.grid.to_dict(),
            "m": phi.m,
            "dtype": "<f8",
            "shape": list(phi.grid.shape),
            "blocks": ["f", "g"],
            "data": prefix.name + ".bin",
        }
    )
    raw = np.ascontiguousarray(phi.f, dtype="<f8").tobytes() + np.ascontiguousarray(phi.g, dtype="<f8").tobytes()
    atomic_write(prefix.with_name(prefix.name + ".bin"), raw)
    atomic_write(prefix.with_name(prefix.name + ".json"), dumps(header))


def read_field_dump(prefix):
    from .field import CauchyData, GridSpec

    prefix = Path(prefix)
    header = json.loads(prefix.with_name(prefix.name + ".json").read_text())
    grid = GridSpec(**header["grid"])
    raw = np.frombuffer(prefix.with_name(header["data"]).read_bytes(), dtype="<f8")
    f, g = raw.reshape((2,) + grid.shape)
    return CauchyData(grid, f.copy(), g.copy(), header["m"])
