"""Wire formats for reports and inputs.

One canonical encoding everywhere: complex numbers as [re, im] pairs,
infinities as the strings "inf" / "-inf", JSON with sorted keys and a
trailing newline so identical content is byte-identical. CSV is reserved
for real-valued tables.
"""

import csv
import dataclasses
import io
import json
import math

import numpy as np

from .errors import ParseError
from .frames import Frame
from .gabor import GaborSystem
from .zak import ZakArray


def sanitize(obj):
    """Recursively convert a report object into plain JSON-ready data."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return sanitize(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [sanitize(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return [sanitize(z.real), sanitize(z.imag)]
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_canonical(obj) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, newline at end."""
    return json.dumps(sanitize(obj), sort_keys=True, indent=2) + "\n"


def _as_pair(entry):
    if (
        not isinstance(entry, (list, tuple))
        or len(entry) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
    ):
        raise ParseError(f"complex entries must be [re, im] pairs, got {entry!r}")
    return complex(float(entry[0]), float(entry[1]))


def _as_int(doc, key):
    v = doc.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise ParseError(f"field {key!r} must be an integer")
    return v


def vector_from_json(entries, length=None):
    if not isinstance(entries, (list, tuple)):
        raise ParseError("vector must be a list of [re, im] pairs")
    v = np.array([_as_pair(e) for e in entries], dtype=np.complex128)
    if length is not None and v.shape[0] != length:
        raise ParseError(f"vector length {v.shape[0]} != {length}")
    return v


def frame_to_json(fr: Frame) -> dict:
    cols = [
        [[float(z.real), float(z.imag)] for z in fr.matrix[:, i]] for i in range(fr.n)
    ]
    return {"d": fr.d, "n": fr.n, "columns": cols}


def frame_from_json(doc) -> Frame:
    if not isinstance(doc, dict):
        raise ParseError("frame document must be a JSON object")
    d = _as_int(doc, "d")
    n = _as_int(doc, "n")
    cols = doc.get("columns")
    if not isinstance(cols, list) or len(cols) != n:
        raise ParseError(f"expected {n} columns")
    M = np.zeros((d, n), dtype=np.complex128)
    for i, col in enumerate(cols):
        M[:, i] = vector_from_json(col, length=d)
    return Frame(M)


def gabor_to_json(sys: GaborSystem) -> dict:
    return {
        "L": sys.L,
        "a": sys.a,
        "b": sys.b,
        "window": [[float(z.real), float(z.imag)] for z in sys.window],
    }


def gabor_from_json(doc) -> GaborSystem:
    if not isinstance(doc, dict):
        raise ParseError("gabor document must be a JSON object")
    L = _as_int(doc, "L")
    a = _as_int(doc, "a")
    b = _as_int(doc, "b")
    g = vector_from_json(doc.get("window"), length=L)
    if a <= 0 or b <= 0 or L % a or L % b:
        raise ParseError("a and b must divide L")
    return GaborSystem(L, g, a, b)


def zak_to_json(z: ZakArray, normalized: bool = False) -> dict:
    vals = z.values / math.sqrt(z.N) if normalized else z.values
    rows = [[[float(v.real), float(v.imag)] for v in row] for row in vals]
    return {"a": z.a, "N": z.N, "rows": rows, "normalized": bool(normalized)}


def zak_from_json(doc) -> ZakArray:
    if not isinstance(doc, dict):
        raise ParseError("zak document must be a JSON object")
    a = _as_int(doc, "a")
    N = _as_int(doc, "N")
    rows = doc.get("rows")
    if not isinstance(rows, list) or len(rows) != a:
        raise ParseError(f"expected {a} rows")
    vals = np.zeros((a, N), dtype=np.complex128)
    for r, row in enumerate(rows):
        vals[r] = vector_from_json(row, length=N)
    if doc.get("normalized"):
        vals = vals * math.sqrt(N)
    return ZakArray(a, N, vals)


def write_csv(rows, fieldnames=None) -> str:
    """Real-valued table as CSV text. Complex or nested cells are refused."""
    if not rows:
        return ""
    if fieldnames is None:
        fieldnames = list(rows[0])
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    w.writeheader()
    for row in rows:
        clean = {}
        for k in fieldnames:
            v = row[k]
            if isinstance(v, (bool, np.bool_)):
                clean[k] = bool(v)
            elif isinstance(v, (int, np.integer)):
                clean[k] = int(v)
            elif isinstance(v, (float, np.floating)):
                clean[k] = float(v)
            elif isinstance(v, str):
                clean[k] = v
            else:
                raise ValueError(f"CSV cells must be real scalars, got {type(v).__name__}")
        w.writerow(clean)
    return buf.getvalue()
