"""Tensor files and JSON reports.

Tensor file layout::

    {"n": 2, "r": 2, "ckl": true,
     "entries": [[1, 1, 1, 1, 2.0, 0.0], [1, 1, 2, 2, 1.0, 0.0], ...]}

Each record is ``[i, j, alpha, beta, re, im]`` with 1-based indices. Unlisted
entries are zero, and every listed entry also fixes its Hermitian partner
``(j, i, beta, alpha)`` to the conjugate value.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .tensor import CurvatureTensor


class TensorFileError(ValueError):
    """Malformed tensor file; the message names the offending line or field."""


def _canonical(idx: tuple[int, int, int, int]) -> bool:
    i, j, a, b = idx
    return idx <= (j, i, b, a)


def tensor_to_dict(R: CurvatureTensor) -> dict:
    records = []
    for idx in np.ndindex(*R.entries.shape):
        if not _canonical(idx):
            continue
        z = R.entries[idx]
        if z == 0:
            continue
        records.append([idx[0] + 1, idx[1] + 1, idx[2] + 1, idx[3] + 1, float(z.real), float(z.imag)])
    return {"n": R.n, "r": R.r, "ckl": bool(R.ckl), "entries": records}


def tensor_from_dict(data: dict, source: str = "<tensor>") -> CurvatureTensor:
    for key, typ in (("n", int), ("r", int), ("ckl", bool), ("entries", list)):
        if key not in data:
            raise TensorFileError(f"{source}: missing field {key!r}")
        if not isinstance(data[key], typ) or (typ is int and isinstance(data[key], bool)):
            raise TensorFileError(f"{source}: field {key!r} must be {typ.__name__}")
    n, r = data["n"], data["r"]
    if n < 1 or r < 1:
        raise TensorFileError(f"{source}: fields 'n' and 'r' must be positive")
    entries = np.zeros((n, n, r, r), dtype=complex)
    seen = {}
    for pos, rec in enumerate(data["entries"]):
        where = f"{source}: entries[{pos}]"
        if not isinstance(rec, list) or len(rec) != 6:
            raise TensorFileError(f"{where}: expected [i, j, alpha, beta, re, im]")
        *idx1, re, im = rec
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in idx1):
            raise TensorFileError(f"{where}: indices must be integers")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            raise TensorFileError(f"{where}: re/im must be numbers")
        i, j, a, b = idx1
        if not (1 <= i <= n and 1 <= j <= n and 1 <= a <= r and 1 <= b <= r):
            raise TensorFileError(f"{where}: index out of range")
        idx = (i - 1, j - 1, a - 1, b - 1)
        partner = (j - 1, i - 1, b - 1, a - 1)
        z = complex(re, im)
        if partner == idx and im != 0:
            raise TensorFileError(f"{where}: self-conjugate entry must be real, got im={im}")
        for target, val in ((idx, z), (partner, z.conjugate())):
            if target in seen and seen[target][0] != val:
                raise TensorFileError(f"{where}: conflicts with entries[{seen[target][1]}]")
        seen[idx], seen[partner] = (z, pos), (z.conjugate(), pos)
        entries[partner] = z.conjugate()
        entries[idx] = z  # a self-partner entry keeps its sign of zero
    try:
        return CurvatureTensor(entries, ckl=data["ckl"])
    except ValueError as exc:
        raise TensorFileError(f"{source}: {exc}") from None


def dumps_tensor(R: CurvatureTensor) -> str:
    return json.dumps(tensor_to_dict(R), indent=1) + "\n"


def loads_tensor(text: str, source: str = "<tensor>") -> CurvatureTensor:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TensorFileError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise TensorFileError(f"{source}: top level must be an object")
    return tensor_from_dict(data, source)


def save_tensor(R: CurvatureTensor, path) -> None:
    Path(path).write_text(dumps_tensor(R))


def load_tensor(path) -> CurvatureTensor:
    path = Path(path)
    return loads_tensor(path.read_text(), str(path))


def frame_to_json(F: np.ndarray) -> list:
    """Complex matrix as nested ``[re, im]`` pairs, row-major."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(F)]


def frame_from_json(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data], dtype=complex)


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if v != v or v in (float("inf"), float("-inf")):
            return None
        return v
    return obj


def dumps_report(report: dict) -> str:
    """Deterministic JSON text (sorted keys, shortest round-trip floats)."""
    return json.dumps(_clean(report), indent=2, sort_keys=True) + "\n"
