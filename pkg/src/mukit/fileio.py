"""Matrix and certificate files.

A matrix file is JSON with one matrix row per line::

    {"n": 2, "entries": [
    [[1, 0], [0.5, -0.25]],
    [[0, 0], [1, 0]]
    ]}

Each entry is an ``[re, im]`` pair written with 17 significant digits, so a
write/read round trip is exact.
"""

import json
import math
from pathlib import Path

import numpy as np

from .errors import InputError


def _num(x):
    x = float(x)
    if not math.isfinite(x):
        raise InputError("non-finite value")
    return format(x, ".17g")


def matrix_to_pairs(M):
    M = np.asarray(M, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def pairs_to_matrix(entries):
    if not isinstance(entries, list) or not entries:
        raise InputError("entries must be a non-empty list of rows")
    n = len(entries)
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"row {i} does not have {n} entries")
        for j, pair in enumerate(row):
            if not isinstance(pair, list) or len(pair) != 2:
                raise InputError(f"entry ({i}, {j}) is not an [re, im] pair")
            try:
                re, im = float(pair[0]), float(pair[1])
            except (TypeError, ValueError):
                raise InputError(f"entry ({i}, {j}) is not numeric") from None
            if not (math.isfinite(re) and math.isfinite(im)):
                raise InputError(f"entry ({i}, {j}) is not finite")
            out[i, j] = complex(re, im)
    return out


def dumps_matrix(M):
    M = np.asarray(M, dtype=np.complex128)
    rows = [
        "[" + ", ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in row) + "]" for row in M
    ]
    return '{"n": %d, "entries": [\n' % M.shape[0] + ",\n".join(rows) + "\n]}\n"


def loads_matrix(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not a matrix file: {exc}") from None
    if not isinstance(data, dict) or "entries" not in data:
        raise InputError("matrix file needs an 'entries' field")
    M = pairs_to_matrix(data["entries"])
    if "n" in data and data["n"] != M.shape[0]:
        raise InputError(f"declared n={data['n']} but found {M.shape[0]} rows")
    return M


def write_matrix(path, M):
    Path(path).write_text(dumps_matrix(M))


def read_matrix(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return loads_matrix(text)


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")
