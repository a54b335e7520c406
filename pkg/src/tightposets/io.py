"""JSON encodings for frames, posets, scaling polytopes and reports.

Frame JSON::

    {"field": "real", "mode": {"exact": {"d": 3}}, "dim": 2,
     "vectors": [[s, s], ...]}

``mode`` is ``{"exact": {"d": d}}`` or ``"float"``; scalars use the
encodings of :func:`tightposets.arith.scalar_to_json`.  Poset JSON is
``{"k": k, "sets": [[], [1, 2], ...]}``.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .arith import QuadRat, scalar_from_json, scalar_to_json, variant
from .errors import ValidationError
from .frame import Frame
from .poset import Poset
from .scalability import ScalingPolytope

__all__ = [
    "frame_to_json",
    "frame_from_json",
    "poset_to_json",
    "poset_from_json",
    "polytope_to_json",
    "scaling_from_json",
    "dumps",
    "sha256_of",
]


def frame_to_json(F: Frame) -> dict:
    mode = {"exact": {"d": F.d}} if F.is_exact else "float"
    return {
        "field": F.field,
        "mode": mode,
        "dim": F.n,
        "vectors": [[scalar_to_json(x) for x in v] for v in F.vectors],
    }


def frame_from_json(obj) -> Frame:
    if not isinstance(obj, dict):
        raise ValidationError("frame JSON must be an object")
    for key in ("field", "mode", "vectors"):
        if key not in obj:
            raise ValidationError(f"frame JSON is missing field {key!r}")
    field, mode, vecs = obj["field"], obj["mode"], obj["vectors"]
    if not isinstance(vecs, list) or not all(isinstance(v, list) for v in vecs):
        raise ValidationError("field 'vectors' must be a list of lists")
    if "dim" in obj and any(len(v) != obj["dim"] for v in vecs):
        raise ValidationError(f"field 'dim' says {obj['dim']} but a vector has another length")
    if mode == "float":
        rows = []
        for v in vecs:
            vals = [scalar_from_json(x) for x in v]
            rows.append(tuple(complex(s) if field == "complex" else float(s) for s in vals))
        return Frame(tuple(rows), field=field, mode="float")
    if isinstance(mode, dict) and set(mode) == {"exact"}:
        d = mode["exact"].get("d", 1) if isinstance(mode["exact"], dict) else 1
        rows = []
        for i, v in enumerate(vecs, 1):
            row = []
            for j, x in enumerate(v, 1):
                s = scalar_from_json(x)
                if variant(s) == "float":
                    raise ValidationError(f"vectors[{i}][{j}]: float entry in an exact frame")
                if d != 1 and variant(s) == "rational":
                    s = QuadRat(s, Fraction(0), d)
                row.append(s)
            rows.append(tuple(row))
        return Frame(tuple(rows), field=field, mode="exact", d=d)
    raise ValidationError("field 'mode' must be \"float\" or {\"exact\": {\"d\": d}}")


def poset_to_json(P: Poset) -> dict:
    return P.to_json()


def poset_from_json(obj) -> Poset:
    return Poset.from_json(obj)


def _plain(x):
    if isinstance(x, QuadRat) and x.b == 0:
        return x.a
    return x


def polytope_to_json(poly: ScalingPolytope) -> dict:
    return {
        "k": poly.k,
        "n": poly.n,
        "m": poly.m,
        "minimal": [[scalar_to_json(_plain(x)) for x in v] for v in poly.minimal],
        "equality_rows": [[scalar_to_json(_plain(x)) for x in r] for r in poly.equality_rows],
        "rhs": [scalar_to_json(_plain(x)) for x in poly.rhs],
    }


def scaling_from_json(obj) -> list:
    """A scaling vector: a plain list of scalars or ``{"w": [...]}``."""
    if isinstance(obj, dict):
        if "w" not in obj:
            raise ValidationError("scaling JSON needs field 'w'")
        obj = obj["w"]
    if not isinstance(obj, list):
        raise ValidationError("scaling must be a list of scalars")
    return [scalar_from_json(x) for x in obj]


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, fixed separators, trailing newline)."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def sha256_of(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
