"""File formats.

Every file is a UTF-8 JSON document.  Complex matrices are row-major nested
arrays of ``[re, im]`` pairs and floats are written with 17 significant
digits, so write -> read -> write reproduces the same bytes.

Schemas
-------
``cdare-1``           problem: ``n, m, A, B, R, H``
``dare-1``            transformed problem: ``n, k, Ahat, Bhat, Rhat, Ghat, Hhat``
``cdare-solution-1``  a single Hermitian matrix ``X`` plus free-form ``kind``
"""

import csv
import json

import numpy as np

from .errors import CdareError, DimensionError
from .model import CdareProblem
from .transform import DareProblem

PROBLEM_SCHEMA = "cdare-1"
DARE_SCHEMA = "dare-1"
SOLUTION_SCHEMA = "cdare-solution-1"

ITERATION_COLUMNS = ("k", "nres", "rho_that", "min_eig_step_diff", "elapsed_s")


class FormatError(CdareError, ValueError):
    pass


def fmt_float(x):
    x = float(x)
    if x != x:
        return ""
    if x == 0.0:
        return "0"
    return format(x, ".17g")


def _json_number(x):
    x = float(x)
    if not np.isfinite(x):
        raise FormatError("non-finite value cannot be serialized")
    return "0" if x == 0.0 else format(x, ".17g")


def _matrix_text(M, indent):
    pad = " " * indent
    rows = []
    for row in np.asarray(M, dtype=np.complex128):
        cells = ", ".join(f"[{_json_number(z.real)}, {_json_number(z.imag)}]" for z in row)
        rows.append(f"{pad}  [{cells}]")
    if not rows:
        return "[]"
    return "[\n" + ",\n".join(rows) + f"\n{pad}]"


def _document(header, matrices):
    lines = ["{"]
    items = [f'  "{k}": {json.dumps(v)}' for k, v in header.items()]
    items += [f'  "{k}": {_matrix_text(M, 2)}' for k, M in matrices.items()]
    lines.append(",\n".join(items))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _read_matrix(doc, key, shape):
    try:
        raw = doc[key]
    except KeyError:
        raise FormatError(f"missing field {key!r}") from None
    rows, cols = shape
    if rows == 0 or cols == 0:
        return np.zeros(shape, dtype=np.complex128)
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"field {key!r} is not a nested array of [re, im] pairs") from exc
    if arr.shape != (rows, cols, 2):
        raise DimensionError(f"field {key!r} has shape {arr.shape[:-1]}, expected {shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _load(path, schema):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema_version") != schema:
        raise FormatError(f"{path}: expected schema_version {schema!r}")
    return doc


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def dumps_problem(P):
    header = {"schema_version": PROBLEM_SCHEMA, "n": P.n, "m": P.m}
    return _document(header, {"A": P.A, "B": P.B, "R": P.R, "H": P.H})


def write_problem(path, P):
    _write(path, dumps_problem(P))


def read_problem(path):
    doc = _load(path, PROBLEM_SCHEMA)
    n, m = int(doc["n"]), int(doc["m"])
    return CdareProblem(
        _read_matrix(doc, "A", (n, n)),
        _read_matrix(doc, "B", (n, m)),
        _read_matrix(doc, "R", (m, m)),
        _read_matrix(doc, "H", (n, n)),
    )


def dumps_dare(D):
    header = {"schema_version": DARE_SCHEMA, "n": D.n, "k": D.Bhat.shape[1]}
    mats = {"Ahat": D.Ahat, "Bhat": D.Bhat, "Rhat": D.Rhat, "Ghat": D.Ghat, "Hhat": D.Hhat}
    return _document(header, mats)


def write_dare(path, D):
    _write(path, dumps_dare(D))


def read_dare(path):
    doc = _load(path, DARE_SCHEMA)
    n, k = int(doc["n"]), int(doc["k"])
    return DareProblem.from_arrays(
        _read_matrix(doc, "Ahat", (n, n)),
        _read_matrix(doc, "Bhat", (n, k)),
        _read_matrix(doc, "Rhat", (k, k)),
        _read_matrix(doc, "Ghat", (n, n)),
        _read_matrix(doc, "Hhat", (n, n)),
    )


def dumps_solution(X, kind="solution"):
    X = np.asarray(X)
    return _document({"schema_version": SOLUTION_SCHEMA, "kind": kind, "n": X.shape[0]}, {"X": X})


def write_solution(path, X, kind="solution"):
    _write(path, dumps_solution(X, kind))


def read_solution(path):
    doc = _load(path, SOLUTION_SCHEMA)
    n = int(doc["n"])
    return _read_matrix(doc, "X", (n, n))


def write_iterations(path, records):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ITERATION_COLUMNS)
        for rec in records:
            w.writerow([rec.k] + [fmt_float(v) for v in rec[1:]])
