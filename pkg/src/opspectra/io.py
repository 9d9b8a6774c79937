"""JSON and CSV formats for matrices, grid functions and block elements.

Matrix JSON::

    {"rows": r, "cols": c, "entries": [[re, im], ...]}     # row-major

Grid-function JSON::

    {"left": a, "right": b, "n": n, "values": [[re, im], ...]}

Grid-function CSV has the header ``s,re,im``.  Block elements serialize as
``{"block_dims": [...], "blocks": [<matrix json>, ...]}``.  CSV files use
LF line endings and 17 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError
from .finitevn import BlockAlgebra, BlockElement
from .numkernel import as_cmat
from .waveline import GridFunction


def fmt_float(x) -> str:
    return format(float(x), ".17g")


def _pairs(values) -> list:
    v = np.asarray(values, dtype=np.complex128).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in v]


def _from_pairs(pairs) -> np.ndarray:
    a = np.asarray(pairs, dtype=float)
    if a.ndim != 2 or a.shape[1] != 2:
        raise InputError("complex entries must be [re, im] pairs")
    return a[:, 0] + 1j * a[:, 1]


def cmat_to_json(m) -> dict:
    m = as_cmat(m)
    return {"rows": m.shape[0], "cols": m.shape[1], "entries": _pairs(m)}


def cmat_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    v = _from_pairs(obj["entries"])
    if v.size != rows * cols:
        raise InputError(f"expected {rows * cols} entries, got {v.size}")
    return v.reshape(rows, cols)


def grid_to_json(f: GridFunction) -> dict:
    return {"left": f.left, "right": f.right, "n": f.n, "values": _pairs(f.values)}


def grid_from_json(obj: dict) -> GridFunction:
    v = _from_pairs(obj["values"])
    if v.size != int(obj["n"]):
        raise InputError("grid value count does not match n")
    return GridFunction(float(obj["left"]), float(obj["right"]), v)


def grid_to_csv(f: GridFunction) -> str:
    return rows_to_csv(["s", "re", "im"], zip(f.s, f.values.real, f.values.imag))


def grid_from_csv(text: str, right: float | None = None) -> GridFunction:
    """Parse ``s,re,im`` rows; ``right`` defaults to last s + spacing."""
    reader = csv.DictReader(io.StringIO(text))
    s, v = [], []
    for row in reader:
        s.append(float(row["s"]))
        v.append(float(row["re"]) + 1j * float(row["im"]))
    if len(s) < 2:
        raise InputError("grid CSV needs at least two rows")
    h = s[1] - s[0]
    return GridFunction(s[0], s[-1] + h if right is None else right, np.array(v))


def block_to_json(x: BlockElement) -> dict:
    return {"block_dims": list(x.algebra.block_dims), "blocks": [cmat_to_json(b) for b in x.blocks]}


def block_from_json(obj: dict) -> BlockElement:
    alg = BlockAlgebra(tuple(obj["block_dims"]))
    return alg.element([cmat_from_json(b) for b in obj["blocks"]])


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays and complex numbers for json.dumps."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> Path:
    """Write through a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path
