"""Matrix dump format: JSON lines, one matrix per record.

Each record is ``{"name": ..., "shape": [rows, cols], "data": rows}`` where
every entry is a ``[re, im]`` pair printed with 17 significant digits.  An
optional first record ``{"header": {...}}`` carries metadata.
"""

from __future__ import annotations

import json

import numpy as np


def _num(x: float) -> str:
    x = float(x)
    if x == 0.0:
        return "0"
    return format(x, ".17g")


def _row(row) -> str:
    return "[" + ",".join(f"[{_num(z.real)},{_num(z.imag)}]" for z in row) + "]"


def matrix_record(matrix, name: str = "") -> str:
    a = np.atleast_2d(np.asarray(matrix, dtype=complex))
    rows = ",".join(_row(r) for r in a)
    return f'{{"name":{json.dumps(name)},"shape":[{a.shape[0]},{a.shape[1]}],"data":[{rows}]}}'


def dumps(matrices, names=None, header: dict | None = None) -> str:
    lines = []
    if header is not None:
        lines.append(json.dumps({"header": header}, sort_keys=True))
    names = names or [str(i) for i in range(len(matrices))]
    lines.extend(matrix_record(m, n) for m, n in zip(matrices, names))
    return "\n".join(lines) + "\n"


def loads(text: str) -> tuple[dict | None, dict[str, np.ndarray]]:
    header = None
    out = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if "header" in rec:
            header = rec["header"]
            continue
        arr = np.array(rec["data"], dtype=float)
        out[rec["name"]] = (arr[..., 0] + 1j * arr[..., 1]).reshape(rec["shape"])
    return header, out


def field_snapshot(f) -> str:
    """Field values flattened to (points, 8) with the grid as header."""
    g = f.grid
    header = {"dims": g.dims, "n": g.n, "length": g.length, "m": f.m, "t": f.t, "layout": "row-major points x 8"}
    return dumps([f.values.reshape(-1, 8)], ["values"], header)
