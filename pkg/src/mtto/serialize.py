"""JSON forms of matrices, conjugations, symbols, operators and reports."""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .linalg import Conjugation, as_matrix
from .model import BlockOperator, ModelSpaceSpec, ModelVector
from .symbols import LaurentSymbol, SymbolDecomposition

SCHEMA = "mtto-report/1"


class SchemaError(ValueError):
    pass


def _require(obj, key: str):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"missing field {key!r}")
    return obj[key]


def _int(obj, key: str) -> int:
    v = _require(obj, key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"field {key!r} must be an integer")
    return v


def _pairs_to_complex(entries) -> np.ndarray:
    try:
        arr = np.asarray(entries, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"entries must be [re, im] pairs: {exc}") from None
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise SchemaError("entries must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def _complex_to_pairs(values) -> list[list[float]]:
    values = np.asarray(values).ravel()
    return [[float(v.real), float(v.imag)] for v in values]


def matrix_to_json(m) -> dict:
    m = np.asarray(m)
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "entries": _complex_to_pairs(m)}


def matrix_from_json(obj) -> np.ndarray:
    rows, cols = _int(obj, "rows"), _int(obj, "cols")
    vals = _pairs_to_complex(_require(obj, "entries"))
    if rows < 1 or cols < 1 or vals.size != rows * cols:
        raise SchemaError(f"entries count {vals.size} does not equal rows*cols = {rows * cols}")
    try:
        return as_matrix(vals.reshape(rows, cols))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def conjugation_to_json(g: Conjugation) -> dict:
    return {"d": g.d, "U": matrix_to_json(g.U)}


def conjugation_from_json(obj) -> Conjugation:
    d = _int(obj, "d")
    U = matrix_from_json(_require(obj, "U"))
    if U.shape != (d, d):
        raise SchemaError(f"U has shape {U.shape}, expected {(d, d)}")
    try:
        return Conjugation(U)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def symbol_to_json(s: LaurentSymbol) -> dict:
    return {
        "N": s.N,
        "d": s.d,
        "coeffs": [{"n": n, "matrix": matrix_to_json(m)} for n, m in s.coeffs.items()],
    }


def symbol_from_json(obj) -> LaurentSymbol:
    N, d = _int(obj, "N"), _int(obj, "d")
    coeffs = {}
    for item in _require(obj, "coeffs"):
        n = _int(item, "n")
        if n in coeffs:
            raise SchemaError(f"duplicate coefficient index {n}")
        coeffs[n] = matrix_from_json(_require(item, "matrix"))
    try:
        return LaurentSymbol(N, d, coeffs)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def symbol_hash(s: LaurentSymbol) -> str:
    blob = json.dumps(symbol_to_json(s), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def decomposition_to_json(dec: SymbolDecomposition) -> dict:
    return {
        "N": dec.N,
        "d": dec.d,
        "phi0": matrix_to_json(dec.phi0),
        "plus": [matrix_to_json(m) for m in dec.plus],
        "minus": [matrix_to_json(m) for m in dec.minus],
    }


def decomposition_from_json(obj) -> SymbolDecomposition:
    try:
        return SymbolDecomposition(
            matrix_from_json(_require(obj, "phi0")),
            tuple(matrix_from_json(m) for m in _require(obj, "plus")),
            tuple(matrix_from_json(m) for m in _require(obj, "minus")),
        )
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def operator_to_json(A: BlockOperator) -> dict:
    N = A.spec.N
    return {
        "N": N,
        "d": A.spec.d,
        "blocks": [[matrix_to_json(A.block(i, j)) for j in range(N)] for i in range(N)],
    }


def operator_from_json(obj) -> BlockOperator:
    N, d = _int(obj, "N"), _int(obj, "d")
    rows = _require(obj, "blocks")
    if len(rows) != N or any(len(r) != N for r in rows):
        raise SchemaError(f"blocks must be an {N}x{N} grid")
    grid = np.array([[matrix_from_json(b) for b in r] for r in rows])
    try:
        return BlockOperator.from_blocks(ModelSpaceSpec(N, d), grid)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def vector_to_json(v: ModelVector) -> dict:
    return {"N": v.spec.N, "d": v.spec.d, "blocks": [_complex_to_pairs(b) for b in v.blocks]}


def vector_from_json(obj) -> ModelVector:
    N, d = _int(obj, "N"), _int(obj, "d")
    blocks = [_pairs_to_complex(b) for b in _require(obj, "blocks")]
    try:
        return ModelVector(ModelSpaceSpec(N, d), np.array(blocks))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def load_json(path) -> object:
    with open(path) as fh:
        return json.load(fh)


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
