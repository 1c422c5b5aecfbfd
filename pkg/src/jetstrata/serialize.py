"""JSON forms of matrices, tensors, jets, embeddings and group algebra elements.

Rationals are written as "p/q" strings and floats as JSON numbers.
"""

import json

import numpy as np

from .embeddings import EmbeddingSpec
from .errors import DimensionMismatch, DomainError
from .scalars import format_scalar, parse_scalar
from .strata import JetPoint
from .symgroup import GroupAlgebraElement, symmetric_group
from .tensors import MultiTensor, SymTensor

INDEX_ORDER = "row-major over (v_0, ..., v_{m-1}, W component)"


def matrix_to_json(M):
    M = np.asarray(M, dtype=object)
    rows, cols = M.shape
    return {"rows": rows, "cols": cols, "entries": [[format_scalar(x) for x in row] for row in M]}


def matrix_from_json(obj):
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = [[parse_scalar(x) for x in row] for row in obj["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"bad matrix JSON: {exc}") from None
    M = np.empty((rows, cols), dtype=object)
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise DimensionMismatch("matrix entries do not match the declared shape")
    for i, row in enumerate(entries):
        M[i, :] = row
    return M


def vector_to_json(v):
    return [format_scalar(x) for x in v]


def vector_from_json(obj):
    return np.array([parse_scalar(x) for x in obj], dtype=object)


def sym_to_json(T):
    return {
        "k": T.k,
        "d": T.d,
        "w": T.w,
        "entries": {",".join(map(str, idx)): vector_to_json(v) for idx, v in sorted(T.entries.items())},
    }


def sym_from_json(obj):
    if "rows" in obj:
        # an order-1 tensor may be given as its (2n, d) matrix
        return SymTensor.from_linear_map(matrix_from_json(obj))
    try:
        k, d, w = int(obj["k"]), int(obj["d"]), int(obj["w"])
        entries = {
            tuple(int(i) for i in key.split(",")): vector_from_json(val) for key, val in obj["entries"].items()
        }
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise DomainError(f"bad SymTensor JSON: {exc}") from None
    return SymTensor(k, d, w, entries)


def multi_to_json(T):
    return {
        "order": T.order,
        "d": T.d,
        "w": T.w,
        "index_order": INDEX_ORDER,
        "entries": [format_scalar(x) for x in T.data.reshape(-1)],
    }


def multi_from_json(obj):
    try:
        m, d, w = int(obj["order"]), int(obj["d"]), int(obj.get("w", 1))
        flat = [parse_scalar(x) for x in obj["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"bad MultiTensor JSON: {exc}") from None
    if len(flat) != d**m * w:
        raise DimensionMismatch(f"expected {d ** m * w} entries, got {len(flat)}")
    return MultiTensor(np.array(flat, dtype=object).reshape((d,) * m + (w,)))


def jet_to_json(jet):
    return {
        "x": vector_to_json(jet.x),
        "y": vector_to_json(jet.y),
        "A": [sym_to_json(a) for a in jet.A],
    }


def jet_from_json(obj):
    try:
        A = [sym_from_json(a) for a in obj["A"]]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"bad JetPoint JSON: {exc}") from None
    if not A:
        raise DomainError("jet has no tensors")
    d, w = A[0].d, A[0].w
    x = vector_from_json(obj.get("x", ["0/1"] * d))
    y = vector_from_json(obj.get("y", ["0/1"] * w))
    for k, a in enumerate(A, start=1):
        if a.k != k:
            raise DimensionMismatch(f"jet entry {k} has order {a.k}")
    return JetPoint(x, y, A)


def embedding_from_json(obj):
    try:
        return EmbeddingSpec(obj["kind"], dict(obj.get("params", {})))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"bad EmbeddingSpec JSON: {exc}") from None


def embedding_to_json(emb):
    return {"kind": emb.kind, "params": emb.params}


def group_element_to_json(x):
    perms = symmetric_group(x.s + 1).perms
    return {
        "s": x.s,
        "coeffs": {",".join(map(str, perms[i])): format_scalar(c) for i, c in enumerate(x.coeffs) if c != 0},
    }


def group_element_from_json(obj):
    s = int(obj["s"])
    terms = [(tuple(int(i) for i in k.split(",")), parse_scalar(v)) for k, v in obj["coeffs"].items()]
    return GroupAlgebraElement.from_terms(s, terms)


def load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path} is not valid JSON: {exc}") from None


def dumps(obj):
    return json.dumps(obj, indent=2, default=_default)


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return [format_scalar(x) for x in o.reshape(-1)]
    try:
        return format_scalar(o)
    except TypeError:
        raise TypeError(f"cannot serialise {type(o).__name__}") from None
