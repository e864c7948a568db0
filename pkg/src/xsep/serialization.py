"""JSON encodings of states, decompositions and verdict payloads."""

from __future__ import annotations

import json
import math
from typing import Any, Optional

import numpy as np

from .core import DEFAULT_TOL, ProductVector, WeightedDecomposition, XState, new_xstate
from .errors import ParseError


def _complex_pair(v: complex) -> list:
    return [float(np.real(v)), float(np.imag(v))]


def _real(val: Any, where: str) -> float:
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ParseError(f"{where}: expected a number, got {json.dumps(val)}")
    out = float(val)
    if not math.isfinite(out):
        raise ParseError(f"{where}: number is not finite")
    return out


def _reals(val: Any, where: str, n: int) -> list:
    if not isinstance(val, list) or len(val) != n:
        raise ParseError(f"{where}: expected a list of {n} numbers")
    return [_real(v, f"{where}[{i}]") for i, v in enumerate(val)]


def _complex(val: Any, where: str) -> complex:
    re, im = _reals(val, where, 2)
    return complex(re, im)


def _complexes(val: Any, where: str, n: int) -> list:
    if not isinstance(val, list) or len(val) != n:
        raise ParseError(f"{where}: expected a list of {n} [re, im] pairs")
    return [_complex(v, f"{where}[{i}]") for i, v in enumerate(val)]


def load_json_text(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def xstate_from_json(obj: Any, tol: Optional[float] = None) -> XState:
    """Decode ``{"a": [...], "b": [...], "c": [[re, im], ...], "tol": r?}``.

    An explicit ``tol`` argument overrides the one stored in the object.
    """
    if isinstance(obj, str):
        obj = load_json_text(obj)
    if not isinstance(obj, dict):
        raise ParseError("state: expected a JSON object")
    for key in ("a", "b", "c"):
        if key not in obj:
            raise ParseError(f"state: missing field {key!r}")
    extra = set(obj) - {"a", "b", "c", "tol"}
    if extra:
        raise ParseError(f"state: unknown field(s) {sorted(extra)}")
    a = _reals(obj["a"], "a", 4)
    b = _reals(obj["b"], "b", 4)
    c = _complexes(obj["c"], "c", 4)
    if tol is None:
        tol = _real(obj["tol"], "tol") if "tol" in obj else DEFAULT_TOL
    if not tol > 0:
        raise ParseError("tol: must be positive")
    return new_xstate(a, b, c, tol)


def xstate_to_json(s: XState, with_tol: bool = False) -> dict:
    out = {
        "a": [float(v) for v in s.a],
        "b": [float(v) for v in s.b],
        "c": [_complex_pair(v) for v in s.c],
    }
    if with_tol:
        out["tol"] = s.tol
    return out


def product_vector_to_json(v: ProductVector) -> dict:
    return {k: [_complex_pair(e) for e in getattr(v, k)] for k in ("x", "y", "z")}


def decomposition_to_json(d: WeightedDecomposition) -> dict:
    return {"terms": [dict(w=w, **product_vector_to_json(v)) for w, v in d.terms]}


def decomposition_from_json(obj: Any) -> WeightedDecomposition:
    if isinstance(obj, str):
        obj = load_json_text(obj)
    if not isinstance(obj, dict) or not isinstance(obj.get("terms"), list):
        raise ParseError("decomposition: expected {\"terms\": [...]}")
    terms = []
    for i, t in enumerate(obj["terms"]):
        where = f"terms[{i}]"
        if not isinstance(t, dict):
            raise ParseError(f"{where}: expected an object")
        w = _real(t.get("w"), f"{where}.w")
        if not w > 0:
            raise ParseError(f"{where}.w: weight must be positive")
        try:
            v = ProductVector(*(_complexes(t.get(k), f"{where}.{k}", 2) for k in ("x", "y", "z")))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"{where}: {exc}") from None
        terms.append((w, v))
    return WeightedDecomposition(tuple(terms))


def parse_z(text: str) -> tuple:
    """Witness parameters as JSON ``[[re, im] x 4]``."""
    return tuple(_complexes(load_json_text(text), "z", 4))
