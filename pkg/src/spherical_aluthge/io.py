"""JSON tuple files and deterministic CSV/JSON output.

A tuple file looks like::

    {"n": 2, "d": 1,
     "matrices": [[[[1, 0], [2, 0]], [[-2, 0], [-1, 0]]]],
     "metadata": {"name": "ex41"}}

``matrices[i][r][c]`` is the ``[re, im]`` pair of entry ``(r, c)`` of
``T_i``.  Floats are written with ``repr`` precision, so a dump/load round
trip is bit-identical for finite values.
"""

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .tuples import COMMUTE_TOL, validate_commuting


class TupleFileError(ValueError):
    """The file is not valid JSON or does not match the tuple schema."""


@dataclass(eq=False)
class TupleFile:
    n: int
    d: int
    matrices: list
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_tuple(cls, T, metadata=None):
        return cls(T.n, T.d, [np.array(m) for m in T], dict(metadata or {}))

    def to_tuple(self, commute_tol=COMMUTE_TOL):
        """Certify the matrices as a commuting tuple (may raise NotCommuting)."""
        return validate_commuting(self.matrices, commute_tol)


def encode_matrix(m):
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(rows, n):
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise TupleFileError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    if arr.shape != (n, n, 2):
        raise TupleFileError(f"expected an {n}x{n} array of [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise TupleFileError("matrix entries must be finite")
    out = np.empty((n, n), dtype=np.complex128)
    out.real, out.imag = arr[..., 0], arr[..., 1]
    return out


def dumps(tf):
    payload = {
        "n": tf.n,
        "d": tf.d,
        "matrices": [encode_matrix(m) for m in tf.matrices],
        "metadata": tf.metadata,
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text):
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TupleFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise TupleFileError("top level must be an object")
    try:
        n, d, mats = int(payload["n"]), int(payload["d"]), payload["matrices"]
    except (KeyError, TypeError, ValueError) as exc:
        raise TupleFileError(f"missing or malformed field: {exc}") from exc
    if n < 1 or d < 1:
        raise TupleFileError("n and d must be positive")
    if not isinstance(mats, list) or len(mats) != d:
        raise TupleFileError(f"expected {d} matrices")
    metadata = payload.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise TupleFileError("metadata must be an object")
    return TupleFile(n, d, [decode_matrix(m, n) for m in mats], metadata)


def dump(tf, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(tf))


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise TupleFileError(f"cannot read {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# output helpers


def jsonable(obj):
    """Convert numpy scalars/arrays and complex numbers to JSON-ready values.

    Complex numbers become ``[re, im]`` pairs; non-finite floats become
    strings so the output stays strict JSON.
    """
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(float(obj.real)), jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if np.isfinite(x) else repr(x)
    return obj


def to_json(obj):
    return json.dumps(jsonable(obj), indent=1, sort_keys=False) + "\n"


def to_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v
