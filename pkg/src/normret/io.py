"""JSON formats for inputs and reports.

Frame:   ``{"field": "exact"|"float", "dim": N, "vectors": [[...], ...]}``
Family:  ``{"field": "exact"|"float", "dim": N, "subspaces": [{"basis": [[...], ...]}, ...]}``

Exact entries are written as ``"p/q"`` strings (integers as ``"p"``); float
entries as JSON numbers.  Vectors and basis vectors are listed one per row.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from .frames import FrameSpec
from .linalg import ModeError, as_matrix
from .subspaces import Subspace, SubspaceFamily
from .verdict import Verdict, WitnessPair

__all__ = [
    "FormatError",
    "encode",
    "frame_to_json",
    "family_to_json",
    "parse_input",
    "witness_to_json",
    "witness_from_json",
    "verdict_to_json",
    "dumps",
]


class FormatError(ValueError):
    """Malformed input; the message names the offending field."""


def _entry(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    return v


def encode(obj: Any):
    """Recursively convert numpy and ``Fraction`` values to JSON values."""
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()] if obj.dtype != object else [encode(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return _entry(obj)


def _field(exact: bool) -> str:
    return "exact" if exact else "float"


def frame_to_json(f: FrameSpec) -> dict:
    out = {"field": _field(f.exact), "dim": f.dim, "vectors": encode(f.vectors.T)}
    if f.labels is not None:
        out["labels"] = list(f.labels)
    if f.meta:
        out["meta"] = encode(f.meta)
    return out


def family_to_json(fam: SubspaceFamily) -> dict:
    exact = fam.exact
    subs = []
    for w in fam:
        b = w.basis if exact or not w.exact else w.basis.astype(float)
        subs.append({"basis": encode(np.asarray(b).T)})
    out = {"field": _field(exact), "dim": fam.dim, "subspaces": subs}
    if fam.meta:
        out["meta"] = encode(fam.meta)
    return out


def _mode(doc: dict, force_exact: bool) -> bool:
    fld = doc.get("field", "exact" if force_exact else None)
    if fld not in ("exact", "float", None):
        raise FormatError(f"field: expected 'exact' or 'float', got {fld!r}")
    if force_exact:
        return True
    return fld == "exact" if fld is not None else None


def _rows(value, where: str, dim: int | None, exact) -> np.ndarray:
    if not isinstance(value, list) or any(not isinstance(r, list) for r in value):
        raise FormatError(f"{where}: expected a list of vectors")
    if not value:
        return None
    try:
        m = as_matrix(value, exact=exact)
    except ModeError as exc:
        raise FormatError(f"{where}: {exc}") from None
    except (ValueError, TypeError) as exc:
        raise FormatError(f"{where}: {exc}") from None
    if dim is not None and m.shape[1] != dim:
        raise FormatError(f"{where}: vectors have length {m.shape[1]}, but dim is {dim}")
    return m


def parse_input(doc, force_exact: bool = False):
    """Frame or family from a parsed JSON document, auto-detected by shape."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise FormatError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("top level: expected a JSON object")
    if "input" in doc and isinstance(doc["input"], dict):
        return parse_input(doc["input"], force_exact)
    exact = _mode(doc, force_exact)
    dim = doc.get("dim")
    if dim is not None and (not isinstance(dim, int) or dim < 1):
        raise FormatError(f"dim: expected a positive integer, got {dim!r}")
    meta = doc.get("meta", {})
    if "vectors" in doc:
        m = _rows(doc["vectors"], "vectors", dim, exact)
        if m is None:
            raise FormatError("vectors: at least one vector is required")
        labels = doc.get("labels")
        return FrameSpec(m.T, labels=tuple(labels) if labels else None, meta=meta)
    if "subspaces" in doc:
        subs = doc["subspaces"]
        if not isinstance(subs, list) or not subs:
            raise FormatError("subspaces: expected a non-empty list")
        if dim is None:
            raise FormatError("dim: required for subspace families")
        members = []
        for i, s in enumerate(subs):
            if not isinstance(s, dict) or "basis" not in s:
                raise FormatError(f"subspaces[{i}]: expected an object with a 'basis' list")
            m = _rows(s["basis"], f"subspaces[{i}].basis", dim, exact)
            if m is None:
                members.append(Subspace.trivial(dim, exact=exact is not False))
            else:
                members.append(Subspace.span(list(m), dim=dim))
        if exact is True and not all(w.exact for w in members):
            raise FormatError("field: exact family contains float entries")
        return SubspaceFamily(tuple(members), meta)
    raise FormatError("top level: expected a 'vectors' or 'subspaces' key")


def witness_to_json(w: WitnessPair) -> dict:
    out = {"kind": w.kind, "x": encode(w.x), "y": encode(w.y)}
    if w.x_scale_sq != 1:
        out["x_scale_sq"] = encode(Fraction(w.x_scale_sq) if isinstance(w.x_scale_sq, (int, Fraction)) else w.x_scale_sq)
    if w.y_scale_sq != 1:
        out["y_scale_sq"] = encode(Fraction(w.y_scale_sq) if isinstance(w.y_scale_sq, (int, Fraction)) else w.y_scale_sq)
    if w.measurements:
        out["measurements_sq"] = encode(w.measurements)
        nx, ny = w.norms_sq()
        out["norms_sq"] = encode([nx, ny])
    return out


def _scalar(v, where):
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError:
            raise FormatError(f"{where}: cannot parse {v!r}") from None
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    raise FormatError(f"{where}: expected a number")


def witness_from_json(doc: dict) -> WitnessPair:
    if not isinstance(doc, dict) or "x" not in doc or "y" not in doc:
        raise FormatError("witness: expected an object with 'x' and 'y'")
    kind = doc.get("kind", "norm")
    if kind not in ("norm", "phase"):
        raise FormatError(f"kind: expected 'norm' or 'phase', got {kind!r}")
    try:
        xy = as_matrix([doc["x"], doc["y"]])
    except (ValueError, TypeError) as exc:
        raise FormatError(f"x/y: {exc}") from None
    return WitnessPair(xy[0], xy[1], kind=kind,
                       x_scale_sq=_scalar(doc.get("x_scale_sq", 1), "x_scale_sq"),
                       y_scale_sq=_scalar(doc.get("y_scale_sq", 1), "y_scale_sq"))


def verdict_to_json(v: Verdict) -> dict:
    out = {"status": v.status.value, "rule": v.rule}
    if v.certificate is not None:
        out["certificate"] = encode(v.certificate)
    if v.witness is not None:
        out["witness"] = witness_to_json(v.witness)
    out["diagnostics"] = encode(v.diagnostics)
    return out


def dumps(doc) -> str:
    return json.dumps(encode(doc), indent=2, sort_keys=True)
