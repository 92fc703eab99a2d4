"""JSON wire format for operators, vectors and subspaces.

Complex numbers are ``[re, im]`` pairs::

    {"m": 3, "n": 3, "entries": [[[re, im], ...], ...]}      # mn x mn matrix
    {"m": 3, "n": 3, "amplitudes": [[re, im], ...]}          # vector
    {"m": 3, "n": 3, "basis": [[[re, im], ...], ...]}        # spanning vectors
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .linalg import HermitianOp, PureVector, Subspace


def _pairs(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).ravel()]


def _complex(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _dims(doc: dict) -> tuple[int, int]:
    try:
        return int(doc["m"]), int(doc["n"])
    except (KeyError, TypeError) as exc:
        raise ValueError("document needs integer fields 'm' and 'n'") from exc


def operator_to_dict(op: HermitianOp) -> dict:
    return {"m": op.dim.m, "n": op.dim.n, "entries": [_pairs(row) for row in op.matrix]}


def operator_from_dict(doc: dict) -> HermitianOp:
    m, n = _dims(doc)
    if "entries" not in doc:
        raise ValueError("matrix document needs an 'entries' field")
    return HermitianOp.from_array(_complex(doc["entries"]), m, n)


def vector_to_dict(vec: PureVector) -> dict:
    return {"m": vec.dim.m, "n": vec.dim.n, "amplitudes": _pairs(vec.amplitudes)}


def vector_from_dict(doc: dict) -> PureVector:
    m, n = _dims(doc)
    if "amplitudes" not in doc:
        raise ValueError("vector document needs an 'amplitudes' field")
    return PureVector.normalized(_complex(doc["amplitudes"]), m, n)


def subspace_to_dict(E: Subspace) -> dict:
    return {"m": E.ambient.m, "n": E.ambient.n, "basis": [_pairs(col) for col in E.basis.T]}


def subspace_from_dict(doc: dict) -> Subspace:
    m, n = _dims(doc)
    if "basis" in doc:
        vecs = [_complex(v) for v in doc["basis"]]
    elif "amplitudes" in doc:
        vecs = [_complex(doc["amplitudes"])]
    else:
        raise ValueError("subspace document needs a 'basis' field")
    return Subspace.span(vecs, m, n)


def load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def atomic_write(path: str, text: str):
    """Write ``text`` to ``path`` through a temporary file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
