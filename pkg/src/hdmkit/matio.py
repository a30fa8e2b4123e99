"""Text file formats: matrices, vectors, HDM/Choi documents, product bases,
and signed-family manifests.

Documents are JSON.  A matrix document has fields ``rows``, ``cols`` and
``data``, where ``data`` is the row-major list of [real, imaginary] pairs;
HDM and Choi documents add a ``dims: [s, L]`` field.  Writers emit floats
with 17 significant digits; readers accept integer and scientific notation.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .catalog import UPB
from .chmap import Choi, SignedRep
from .errors import FormatError


def _f17(x: float) -> str:
    return format(float(x), ".17g")


def _data_lines(m: np.ndarray) -> str:
    rows = []
    for r in range(m.shape[0]):
        cells = ", ".join(
            f"[{_f17(z.real)}, {_f17(z.imag)}]" for z in m[r])
        rows.append("    " + cells)
    return ",\n".join(rows)


def dumps_matrix(m, dims: tuple[int, int] | None = None) -> str:
    """Serialize a matrix (optionally carrying bipartite dims)."""
    m = np.atleast_2d(np.asarray(m, dtype=np.complex128))
    head = [f'  "rows": {m.shape[0]}', f'  "cols": {m.shape[1]}']
    if dims is not None:
        head.append(f'  "dims": [{int(dims[0])}, {int(dims[1])}]')
    body = _data_lines(m)
    return "{\n" + ",\n".join(head) + ',\n  "data": [\n' + body + "\n  ]\n}\n"


def loads_matrix(text: str) -> tuple[np.ndarray, tuple[int, int] | None]:
    """Parse a matrix document; returns (matrix, dims-or-None)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from exc
    return _matrix_from_doc(doc)


def _matrix_from_doc(doc) -> tuple[np.ndarray, tuple[int, int] | None]:
    if not isinstance(doc, dict):
        raise FormatError("matrix document must be an object")
    for key in ("rows", "cols", "data"):
        if key not in doc:
            raise FormatError(f"missing field {key!r}")
    rows, cols = doc["rows"], doc["cols"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise FormatError("rows and cols must be positive integers")
    data = doc["data"]
    if not isinstance(data, list) or len(data) != rows * cols:
        raise FormatError(
            f"data must list rows*cols = {rows * cols} entries")
    out = np.empty(rows * cols, dtype=np.complex128)
    for i, cell in enumerate(data):
        if (not isinstance(cell, list) or len(cell) != 2
                or not all(isinstance(x, (int, float)) for x in cell)):
            raise FormatError(f"entry {i} is not a [real, imaginary] pair")
        out[i] = complex(cell[0], cell[1])
    if not np.isfinite(out).all():
        raise FormatError("entries must be finite")
    dims = None
    if "dims" in doc:
        d = doc["dims"]
        if (not isinstance(d, list) or len(d) != 2
                or not all(isinstance(x, int) and x > 0 for x in d)):
            raise FormatError("dims must be a pair of positive integers")
        dims = (d[0], d[1])
    return out.reshape(rows, cols), dims


def write_matrix(path, m, dims=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_matrix(m, dims))


def read_matrix(path) -> tuple[np.ndarray, tuple[int, int] | None]:
    with open(path, encoding="utf-8") as fh:
        return loads_matrix(fh.read())


def write_vector(path, v) -> None:
    write_matrix(path, np.asarray(v, dtype=np.complex128).reshape(-1, 1))


def read_vector(path) -> np.ndarray:
    m, _ = read_matrix(path)
    if m.shape[1] != 1:
        raise FormatError(f"vector document must have cols = 1, got {m.shape[1]}")
    return m.reshape(-1)


def write_hdm(path, t, dims) -> None:
    t = np.asarray(t, dtype=np.complex128)
    if t.shape != (int(dims[0]), int(dims[1])):
        raise FormatError(f"HDM shape {t.shape} does not match dims {dims}")
    write_matrix(path, t, dims)


def read_hdm(path) -> tuple[np.ndarray, tuple[int, int]]:
    m, dims = read_matrix(path)
    if dims is None:
        dims = m.shape
    if m.shape != dims:
        raise FormatError(f"HDM shape {m.shape} does not match dims {dims}")
    return m, dims


def write_choi(path, choi: Choi) -> None:
    write_matrix(path, choi.mat, choi.dims)


def read_choi(path, dims=None) -> Choi:
    m, file_dims = read_matrix(path)
    if dims is not None and file_dims is not None and tuple(dims) != file_dims:
        raise FormatError(
            f"requested dims {tuple(dims)} conflict with file dims {file_dims}")
    use = tuple(dims) if dims is not None else file_dims
    if use is None:
        raise FormatError("Choi document carries no dims and none were given")
    return Choi(m, use)


def write_upb(path, u: UPB) -> None:
    parts = [f'  "dims": [{u.dims[0]}, {u.dims[1]}],\n  "members": [']
    entries = []
    for alpha, beta in u.members:
        a = dumps_matrix(alpha.reshape(-1, 1)).strip()
        b = dumps_matrix(beta.reshape(-1, 1)).strip()
        entries.append(f'    {{"alpha": {a}, "beta": {b}}}')
    body = ",\n".join(entries)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("{\n" + parts[0] + "\n" + body + "\n  ]\n}\n")


def read_upb(path) -> UPB:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "dims" not in doc or "members" not in doc:
        raise FormatError("UPB document needs dims and members")
    d = doc["dims"]
    if (not isinstance(d, list) or len(d) != 2
            or not all(isinstance(x, int) and x > 0 for x in d)):
        raise FormatError("dims must be a pair of positive integers")
    members = []
    if not isinstance(doc["members"], list):
        raise FormatError("members must be a list")
    for entry in doc["members"]:
        if not isinstance(entry, dict) or "alpha" not in entry or "beta" not in entry:
            raise FormatError("each member needs alpha and beta vectors")
        alpha, _ = _matrix_from_doc(entry["alpha"])
        beta, _ = _matrix_from_doc(entry["beta"])
        if alpha.shape[1] != 1 or beta.shape[1] != 1:
            raise FormatError("member vectors must have cols = 1")
        members.append((alpha.reshape(-1), beta.reshape(-1)))
    return UPB((d[0], d[1]), members)


def write_signed_rep(dirpath, rep: SignedRep, prefix: str = "family") -> str:
    """Write both HDM families plus a manifest; returns the manifest path."""
    os.makedirs(dirpath, exist_ok=True)
    pos_files, neg_files = [], []
    for i, a in enumerate(rep.positive):
        name = f"{prefix}-pos-{i:03d}.json"
        write_hdm(os.path.join(dirpath, name), a, rep.dims)
        pos_files.append(name)
    for j, b in enumerate(rep.negative):
        name = f"{prefix}-neg-{j:03d}.json"
        write_hdm(os.path.join(dirpath, name), b, rep.dims)
        neg_files.append(name)
    manifest = {
        "dims": [rep.dims[0], rep.dims[1]],
        "positive": pos_files,
        "negative": neg_files,
    }
    manifest_path = os.path.join(dirpath, f"{prefix}-manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest_path


def read_signed_rep(manifest_path) -> SignedRep:
    with open(manifest_path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not {"dims", "positive", "negative"} <= doc.keys():
        raise FormatError("manifest needs dims, positive and negative")
    base = os.path.dirname(manifest_path)
    dims = (doc["dims"][0], doc["dims"][1])
    pos = [read_hdm(os.path.join(base, name))[0] for name in doc["positive"]]
    neg = [read_hdm(os.path.join(base, name))[0] for name in doc["negative"]]
    return SignedRep(pos, neg, dims)
