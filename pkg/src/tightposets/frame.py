"""Frames, frame operators and diagram vectors.

A :class:`Frame` is an ordered list of ``k`` vectors in dimension ``n``.  It
is either *exact* (entries from the scalar tower, with at most one quadratic
extension ``Q(sqrt d)`` per frame) or *float*.  Whether the vectors span is a
separate predicate, :func:`spans_space`.

Diagram vectors are stored in reduced form: for each pair ``i < j`` (in
lexicographic order) the difference ``|f(i)|^2 - |f(j)|^2`` and the product
``f(i) * conj(f(j))``.  The normalising constants that make the full diagram
vector an isometry on the unit sphere are irrational, so they are dropped;
each full coordinate is a fixed positive multiple of a reduced one, hence zero
sums and (anti)parallelism are unchanged.  :func:`full_diagram_vector`
rebuilds the normalised float version.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .arith import (
    DEFAULT_TOL,
    GaussRat,
    Tolerance,
    abs2,
    conj,
    rational_parts,
    to_float,
    variant,
)
from .errors import MixedScalarError, ValidationError, ZeroVectorError

__all__ = [
    "Frame",
    "ReducedDiagramVector",
    "FrameOperatorReport",
    "diagram_vector",
    "full_diagram_vector",
    "diagram_rows_exact",
    "diagram_rows_float",
    "subset_is_tight",
    "frame_operator",
    "spans_space",
    "spark",
    "is_full_spark",
    "zero_vector_indices",
]


def _pairs(n: int):
    return list(combinations(range(n), 2))


@dataclass(frozen=True)
class Frame:
    """Ordered vectors ``f_1..f_k`` in ``R^n`` or ``C^n``.

    ``mode`` is ``"exact"`` or ``"float"``.  In exact mode ``d`` is the
    square-free radicand shared by all :class:`QuadRat` entries (``1`` when
    every entry is rational or Gaussian rational).
    """

    vectors: tuple
    field: str = "real"
    mode: str = "exact"
    d: int = 1

    def __post_init__(self):
        if self.field not in ("real", "complex"):
            raise ValidationError(f"field must be 'real' or 'complex', got {self.field!r}")
        if self.mode not in ("exact", "float"):
            raise ValidationError(f"mode must be 'exact' or 'float', got {self.mode!r}")
        if not self.vectors:
            raise ValidationError("a frame needs at least one vector")
        n = len(self.vectors[0])
        if n < 1 or any(len(v) != n for v in self.vectors):
            raise ValidationError("all frame vectors must have the same positive length")
        for v in self.vectors:
            for x in v:
                kind = variant(x)
                if self.mode == "float":
                    if kind != "float":
                        raise MixedScalarError("float-mode frame holds an exact entry")
                    if self.field == "real" and isinstance(x, complex):
                        raise ValidationError("complex entry in a real frame")
                    continue
                if kind == "float":
                    raise MixedScalarError("exact-mode frame holds a float entry")
                if self.field == "real" and kind == "gaussian":
                    raise ValidationError("Gaussian rational entry in a real frame")
                if self.field == "complex" and kind == "quad":
                    raise ValidationError("complex frames take Gaussian rational entries only")
                if kind == "quad" and x.d != self.d:
                    raise MixedScalarError(f"entry in Q(sqrt {x.d}) but frame has d={self.d}")

    # -- constructors -------------------------------------------------
    @classmethod
    def exact(cls, vectors: Iterable[Sequence], d: int = 1, field: str | None = None) -> "Frame":
        """Build an exact frame; ints become ``Fraction``."""
        vecs = []
        has_complex = False
        for v in vectors:
            row = []
            for x in v:
                if isinstance(x, int) and not isinstance(x, bool):
                    x = Fraction(x)
                if isinstance(x, GaussRat):
                    has_complex = True
                row.append(x)
            vecs.append(tuple(row))
        if field is None:
            field = "complex" if has_complex else "real"
        return cls(tuple(vecs), field=field, mode="exact", d=d)

    @classmethod
    def from_array(cls, vectors) -> "Frame":
        """Float frame from an array-like of shape (k, n)."""
        arr = np.asarray(vectors)
        if arr.ndim != 2:
            raise ValidationError("expected a (k, n) array of vectors")
        if np.iscomplexobj(arr):
            vecs = tuple(tuple(complex(x) for x in row) for row in arr)
            return cls(vecs, field="complex", mode="float")
        vecs = tuple(tuple(float(x) for x in row) for row in arr)
        return cls(vecs, field="real", mode="float")

    # -- basic properties ---------------------------------------------
    @property
    def k(self) -> int:
        return len(self.vectors)

    @property
    def n(self) -> int:
        return len(self.vectors[0])

    @property
    def is_exact(self) -> bool:
        return self.mode == "exact"

    def array(self) -> np.ndarray:
        """Float image as a (k, n) array (complex dtype for complex frames)."""
        dtype = complex if self.field == "complex" else float
        return np.array([[to_float(x) for x in v] for v in self.vectors], dtype=dtype)

    def to_float(self) -> "Frame":
        if not self.is_exact:
            return self
        return Frame(
            tuple(tuple(to_float(x) for x in v) for v in self.vectors),
            field=self.field,
            mode="float",
        )

    def subframe(self, indices: Iterable[int]) -> "Frame":
        """Frame made of the vectors at the given 0-based indices."""
        return Frame(tuple(self.vectors[i] for i in indices), self.field, self.mode, self.d)

    def __len__(self):
        return self.k


@dataclass(frozen=True)
class ReducedDiagramVector:
    diffs: tuple
    prods: tuple

    def realified(self) -> tuple:
        """Real coordinates: diffs, then Re(prods), then Im(prods) if complex."""
        out = list(self.diffs)
        if any(isinstance(p, (GaussRat, complex)) for p in self.prods):
            out += [p.re if isinstance(p, GaussRat) else p.real for p in self.prods]
            out += [p.im if isinstance(p, GaussRat) else p.imag for p in self.prods]
        else:
            out += list(self.prods)
        return tuple(out)


def diagram_vector(f: Sequence, field: str = "real") -> ReducedDiagramVector:
    n = len(f)
    if n < 2:
        raise ValidationError("diagram vectors need dimension n >= 2")
    pairs = _pairs(n)
    if field == "complex":
        sq = [abs2(x) for x in f]
        prods = tuple(f[i] * conj(f[j]) for i, j in pairs)
    else:
        sq = [x * x for x in f]
        prods = tuple(f[i] * f[j] for i, j in pairs)
    diffs = tuple(sq[i] - sq[j] for i, j in pairs)
    return ReducedDiagramVector(diffs, prods)


def full_diagram_vector(f: Sequence, field: str = "real") -> np.ndarray:
    """Normalised float diagram vector (length n(n-1), or 3n(n-1)/2 complex)."""
    f = np.asarray([to_float(x) for x in f])
    n = len(f)
    if n < 2:
        raise ValidationError("diagram vectors need dimension n >= 2")
    pairs = _pairs(n)
    c = 1.0 / math.sqrt(n - 1)
    if field == "complex":
        diffs = [abs(f[i]) ** 2 - abs(f[j]) ** 2 for i, j in pairs]
        prods = []
        for i, j in pairs:
            prods.append(math.sqrt(n) * f[i] * np.conj(f[j]))
            prods.append(math.sqrt(n) * np.conj(f[i]) * f[j])
        return c * np.array(diffs + prods, dtype=complex)
    diffs = [f[i] ** 2 - f[j] ** 2 for i, j in pairs]
    prods = [math.sqrt(2 * n) * f[i] * f[j] for i, j in pairs]
    return c * np.array(diffs + prods, dtype=float)


def zero_vector_indices(F: Frame, tol: Tolerance = DEFAULT_TOL) -> list[int]:
    """0-based indices of zero vectors (float mode: within ``tol.absolute``)."""
    out = []
    for i, v in enumerate(F.vectors):
        if F.is_exact:
            if all(x == 0 for x in v):
                out.append(i)
        elif math.sqrt(sum(abs(x) ** 2 for x in v)) <= tol.absolute:
            out.append(i)
    return out


def diagram_rows_exact(F: Frame) -> list[list[Fraction]]:
    """Reduced diagram vectors as rational coordinate rows.

    Quadratic and Gaussian coordinates are split over the Q-basis ``{1, sqrt d}``
    or ``{1, i}``; a sum vanishes iff every rational part does.
    """
    if not F.is_exact:
        raise MixedScalarError("diagram_rows_exact needs an exact frame")
    rows = []
    for v in F.vectors:
        dv = diagram_vector(v, F.field)
        row = []
        for x in dv.diffs + dv.prods:
            parts = rational_parts(x)
            if F.d > 1 and F.field == "real" and len(parts) == 1:
                parts = (parts[0], Fraction(0))
            elif F.field == "complex" and len(parts) == 1:
                parts = (parts[0], Fraction(0))
            row.extend(parts)
        rows.append(row)
    return rows


def diagram_rows_float(F: Frame) -> np.ndarray:
    """Reduced diagram vectors, realified, as a float (k, m) array."""
    A = F.array()
    n = F.n
    if n < 2:
        raise ValidationError("diagram vectors need dimension n >= 2")
    ii, jj = zip(*_pairs(n))
    ii, jj = list(ii), list(jj)
    sq = np.abs(A) ** 2
    diffs = sq[:, ii] - sq[:, jj]
    if F.field == "complex":
        prods = A[:, ii] * np.conj(A[:, jj])
        return np.hstack([diffs, prods.real, prods.imag])
    return np.hstack([diffs, A[:, ii] * A[:, jj]])


def subset_is_tight(F: Frame, J: Iterable[int], tol: Tolerance = DEFAULT_TOL) -> bool:
    """Tightness of ``{f_j : j in J}`` via the zero sum of diagram vectors.

    ``J`` holds 0-based indices.
    """
    J = sorted(set(J))
    if not J:
        raise ValidationError("J must be nonempty")
    if F.n < 2:
        raise ValidationError("tightness via diagram vectors needs n >= 2")
    zeros = set(zero_vector_indices(F, tol))
    if all(j in zeros for j in J):
        raise ZeroVectorError([j + 1 for j in J])
    if F.is_exact:
        total = None
        for j in J:
            dv = diagram_vector(F.vectors[j], F.field)
            coords = dv.diffs + dv.prods
            total = list(coords) if total is None else [a + b for a, b in zip(total, coords)]
        return all(x == 0 for x in total)
    rows = diagram_rows_float(F)[J]
    scale = float(np.max(np.linalg.norm(rows, axis=1)))
    return float(np.linalg.norm(rows.sum(axis=0))) <= tol.threshold(scale)


@dataclass(frozen=True)
class FrameOperatorReport:
    S: tuple
    is_tight: bool
    tight_bound: object = None


def frame_operator(F: Frame, tol: Tolerance = DEFAULT_TOL) -> FrameOperatorReport:
    """``S = sum_i f_i f_i^*`` and whether it is a multiple of the identity."""
    n = F.n
    if F.is_exact:
        zero = Fraction(0)
        S = [[zero] * n for _ in range(n)]
        for v in F.vectors:
            for a in range(n):
                for b in range(n):
                    S[a][b] = S[a][b] + v[a] * conj(v[b])
        lam = S[0][0]
        tight = all(
            (S[a][b] == lam) if a == b else (S[a][b] == 0) for a in range(n) for b in range(n)
        )
        lam_out = lam.re if isinstance(lam, GaussRat) else lam
        return FrameOperatorReport(
            tuple(tuple(r) for r in S), tight, lam_out if tight else None
        )
    A = F.array()
    S = A.T @ A.conj()
    lam = float(np.real(np.trace(S))) / n
    scale = float(np.max(np.abs(S))) if S.size else 1.0
    dev = np.abs(S - lam * np.eye(n)).max()
    tight = bool(dev <= tol.threshold(scale))
    Sout = tuple(tuple(complex(x) if F.field == "complex" else float(np.real(x)) for x in r) for r in S)
    return FrameOperatorReport(Sout, tight, lam if tight else None)


def _float_rank(A: np.ndarray, tol: Tolerance) -> int:
    if A.size == 0:
        return 0
    sv = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(sv > tol.threshold(float(sv[0]) if sv.size else 1.0)))


def _rank(F: Frame, idx: Sequence[int], tol: Tolerance) -> int:
    if F.is_exact:
        return linalg.rank([list(F.vectors[i]) for i in idx])
    return _float_rank(F.array()[list(idx)], tol)


def spans_space(F: Frame, tol: Tolerance = DEFAULT_TOL) -> bool:
    return _rank(F, range(F.k), tol) == F.n


def spark(F: Frame, tol: Tolerance = DEFAULT_TOL) -> int:
    """Size of the smallest linearly dependent subset; ``n+1`` if every n-subset is a basis."""
    if not spans_space(F, tol):
        raise ValidationError("spark is defined here for spanning frames only")
    for size in range(1, F.n + 1):
        for combo in combinations(range(F.k), size):
            if _rank(F, combo, tol) < size:
                return size
    return F.n + 1


def is_full_spark(F: Frame, tol: Tolerance = DEFAULT_TOL) -> bool:
    return spark(F, tol) == F.n + 1

