"""Index spans, span closure and planar frames realizing a given poset.

For a poset ``P`` over ``{1..k}`` the index span ``K`` is the rational span of
the indicator vectors ``[J]``, ``J in P``.  A frame's diagram vectors, read
coordinate by coordinate, give vectors orthogonal to ``K``; conversely any
integer vector ``v`` in the complement ``K^perp`` whose zero-sum subsets are
exactly ``P`` yields a planar frame with factor poset ``P``.  Such ``v``
exist precisely when ``P`` is span-closed; this module searches for the
smallest ones.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .arith import DEFAULT_TOL, Tolerance
from .errors import (
    LimitExceededError,
    NotSpanClosedError,
    SearchBoundExceeded,
    SingletonError,
    ValidationError,
)
from .factor_poset import MITM_LIMIT, factor_poset
from .frame import Frame, is_full_spark
from .poset import Poset, indices_from_mask, set_sort_key
from .subsetsum import (
    integerize,
    popcount,
    subset_matrix,
    zero_sum_masks_exact,
    zero_sum_masks_mitm,
)

__all__ = [
    "IndexSpanBasis",
    "index_span",
    "SpanClosedCheck",
    "is_span_closed",
    "span_closure",
    "SingletonWarning",
    "witness_bound",
    "InverseResult",
    "inverse_frame_r2",
    "inverse_full_spark_r2",
    "invert_diagram_vector_r2",
    "frame_from_rows",
    "FullSparkCheck",
    "full_spark_obstruction",
    "witness_candidates",
]

# cap on the number of integer points visited by one witness search
MAX_CANDIDATES = 20_000_000
_CHUNK_CELLS = 1 << 22


class SingletonWarning(UserWarning):
    """A span closure acquired singletons, i.e. it cannot be a factor poset."""


def _indicator(mask: int, k: int) -> list[Fraction]:
    return [Fraction((mask >> i) & 1) for i in range(k)]


@dataclass(frozen=True)
class IndexSpanBasis:
    """Row-reduced basis of ``K`` and a basis of its orthogonal complement."""

    k: int
    basis: tuple
    complement_basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def complement_columns(self) -> list[list[Fraction]]:
        """Column ``i`` of the complement basis matrix, for ``i = 1..k``.

        ``[J]`` lies in ``K`` iff the columns indexed by ``J`` sum to zero.
        """
        C = self.complement_basis
        return [[row[i] for row in C] for i in range(self.k)]

    def contains(self, mask: int) -> bool:
        """Exact membership of ``[J]`` in ``K`` by solving a linear system."""
        return linalg.in_row_space(list(self.basis), _indicator(mask, self.k))


def index_span(P: Poset) -> IndexSpanBasis:
    rows = [_indicator(m, P.k) for m in P.nonempty]
    basis, _ = linalg.rref(rows, P.k) if rows else ([], [])
    comp = linalg.nullspace(basis, P.k)
    return IndexSpanBasis(P.k, tuple(map(tuple, basis)), tuple(map(tuple, comp)))


def _check_singletons(P: Poset) -> None:
    singles = [indices_from_mask(m)[0] for m in P.nonempty if popcount(m) == 1]
    if singles:
        raise SingletonError(
            f"singleton(s) {singles} in the poset; they stand for zero vectors"
        )


def _span_masks(S: IndexSpanBasis) -> list[int]:
    """All ``J`` with ``[J]`` in ``K``, as zero-sum subsets of complement columns."""
    cols = integerize(S.complement_columns())
    if S.k > 24:
        if S.k > MITM_LIMIT:
            raise LimitExceededError(f"k={S.k} exceeds the span scan limit {MITM_LIMIT}")
        return zero_sum_masks_mitm(cols)
    return zero_sum_masks_exact(cols)


@dataclass(frozen=True)
class SpanClosedCheck:
    ok: bool
    witness: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_span_closed(P: Poset, method: str = "subset-sum") -> SpanClosedCheck:
    """Whether no ``J`` outside ``P`` has ``[J]`` in the index span of ``P``.

    ``method="subset-sum"`` scans zero-sum subsets of the complement columns;
    ``method="solve"`` tests each ``J`` outside ``P`` by an exact linear solve.
    On failure the witness is the smallest offending ``J``.
    """
    _check_singletons(P)
    S = index_span(P)
    if method == "subset-sum":
        extra = [m for m in _span_masks(S) if m not in P]
    elif method == "solve":
        extra = [m for m in range(1, 1 << P.k) if m not in P and S.contains(m)]
    else:
        raise ValidationError(f"unknown method {method!r}")
    if not extra:
        return SpanClosedCheck(True)
    return SpanClosedCheck(False, min(extra, key=set_sort_key))


def span_closure(P: Poset) -> Poset:
    """``P`` together with every ``J`` whose indicator lies in the index span.

    Singletons in the result are reported with a :class:`SingletonWarning`.
    """
    S = index_span(P)
    Q = Poset(P.k, tuple(set(P.sets) | set(_span_masks(S))))
    singles = [indices_from_mask(m)[0] for m in Q.nonempty if popcount(m) == 1]
    if singles:
        warnings.warn(
            f"span closure contains singleton(s) {singles}; no frame without zero "
            "vectors has this factor poset",
            SingletonWarning,
            stacklevel=2,
        )
    return Q


def witness_bound(k: int) -> int:
    """Entry bound ``ceil(2**-(k-1) * k**(k/2))`` for integer witnesses."""
    if k < 1:
        raise ValidationError("k must be positive")
    # exact: ceil(k^(k/2) / 2^(k-1)) computed with integers
    if k % 2 == 0:
        num = k ** (k // 2)
        den = 2 ** (k - 1)
        return max(1, -(-num // den))
    # k odd: k^(k/2) = sqrt(k^k); ceil(sqrt(k^k)/2^(k-1)) = ceil(sqrt(k^k / 4^(k-1)))
    num, den = k**k, 4 ** (k - 1)
    q = -(-num // den)
    r = math.isqrt(q)
    while r * r * den < num:
        r += 1
    while r > 1 and (r - 1) ** 2 * den >= num:
        r -= 1
    return max(1, r)


class _Lattice:
    """Integer points of ``K^perp`` parametrised by their free coordinates."""

    def __init__(self, S: IndexSpanBasis):
        self.k = S.k
        comp = [list(r) for r in S.complement_basis]
        self.r = len(comp)
        if self.r == 0:
            self.M = np.zeros((0, self.k), dtype=np.int64)
            self.L = 1
            return
        L = 1
        for row in comp:
            for q in row:
                L = L * q.denominator // math.gcd(L, q.denominator)
        self.L = L
        self.M = np.array([[int(q * L) for q in row] for row in comp], dtype=np.int64)

    def level(self, B: int):
        """Yield arrays of integer vectors with infinity norm exactly ``B``."""
        if self.r == 0:
            return
        side = 2 * B + 1
        total = side**self.r
        chunk = max(1, _CHUNK_CELLS // max(1, self.r))
        vals = np.arange(-B, B + 1, dtype=np.int64)
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            T = np.empty((idx.size, self.r), dtype=np.int64)
            rest = idx
            for c in range(self.r - 1, -1, -1):
                T[:, c] = vals[rest % side]
                rest = rest // side
            X = T @ self.M
            if self.L != 1:
                keep = np.all(X % self.L == 0, axis=1)
                X = X[keep] // self.L
            X = X[np.abs(X).max(axis=1) == B]
            yield X


def _basic_filter(X: np.ndarray) -> np.ndarray:
    if X.size == 0:
        return X
    X = X[np.all(X != 0, axis=1)]
    if X.size == 0:
        return X
    return X[np.gcd.reduce(X, axis=1) == 1]


def _lex_max(X: np.ndarray):
    if X.shape[0] == 0:
        return None
    order = np.lexsort(X.T[::-1])
    return tuple(int(x) for x in X[order[-1]])


def _zero_pattern_ok(X: np.ndarray, P: Poset, subsets: np.ndarray | None) -> np.ndarray:
    """Rows of ``X`` whose zero-sum subsets are exactly ``P``."""
    if subsets is not None:
        target = np.zeros(1 << P.k, dtype=bool)
        target[list(P.sets)] = True
        step = max(1, _CHUNK_CELLS >> P.k)
        out = np.empty(X.shape[0], dtype=bool)
        for s in range(0, X.shape[0], step):
            Z = (subsets @ X[s : s + step].T) == 0
            out[s : s + step] = np.all(Z == target[:, None], axis=0)
        return out
    return np.array(
        [zero_sum_masks_exact([[int(x)] for x in row]) == list(sorted(P.sets)) for row in X],
        dtype=bool,
    )


def witness_candidates(P: Poset, max_norm: int | None = None):
    """Iterate integer vectors of ``K^perp`` without zeros and with gcd 1.

    Order: increasing infinity norm, then decreasing lexicographic.  Without
    ``max_norm`` the iteration does not stop by itself.
    """
    S = index_span(P)
    lat = _Lattice(S)
    levels = itertools.count(1) if max_norm is None else range(1, max_norm + 1)
    for B in levels:
        rows = []
        for X in lat.level(B):
            X = _basic_filter(X)
            rows.extend(tuple(int(x) for x in r) for r in X)
        for row in sorted(rows, reverse=True):
            yield row


def _search(P: Poset, accept, max_norm: int | None, what: str):
    S = index_span(P)
    lat = _Lattice(S)
    levels = itertools.count(1) if max_norm is None else range(1, max_norm + 1)
    for B in levels:
        if (2 * B + 1) ** lat.r > MAX_CANDIDATES:
            raise SearchBoundExceeded(
                f"{what} search at norm {B} would visit more than {MAX_CANDIDATES} points"
            )
        best = None
        for X in lat.level(B):
            X = _basic_filter(X)
            if X.shape[0] == 0:
                continue
            cand = _lex_max(X[accept(X)])
            if cand is not None and (best is None or cand > best):
                best = cand
        if best is not None:
            return best
    raise SearchBoundExceeded(f"no {what} with entries bounded by {max_norm}")


def _subsets_for(k: int):
    return subset_matrix(k) if k <= 16 else None


def _find_v(P: Poset, single_row: bool, max_norm: int | None) -> tuple:
    if single_row:
        subs = _subsets_for(P.k)
        return _search(P, lambda X: _zero_pattern_ok(X, P, subs), max_norm, "single-row witness")
    return _search(P, lambda X: np.ones(X.shape[0], dtype=bool), max_norm, "first-row witness")


def _find_w(P: Poset, v: tuple, full_spark: bool, max_norm: int | None, dim_perp: int) -> tuple:
    k = P.k
    vv = np.array(v, dtype=np.int64)
    subs = subset_matrix(k) if k <= 20 else None
    if subs is not None:
        vz = np.flatnonzero(subs @ vv == 0)
    else:
        vz = np.array(zero_sum_masks_exact([[x] for x in v]), dtype=np.int64)
    bad = [int(m) for m in vz if int(m) not in P]
    Sv = (
        ((np.array(bad, dtype=np.int64)[:, None] >> np.arange(k)) & 1)
        if bad
        else np.zeros((0, k), dtype=np.int64)
    )
    pairs = [(i, j) for i, j in itertools.combinations(range(k), 2) if v[i] * v[j] > 0]
    pi = np.array([p[0] for p in pairs], dtype=np.int64)
    pj = np.array([p[1] for p in pairs], dtype=np.int64)

    def accept(W: np.ndarray) -> np.ndarray:
        ok = np.all((Sv @ W.T) != 0, axis=0) if bad else np.ones(W.shape[0], dtype=bool)
        if dim_perp > 1:
            # not parallel to v: some 2x2 minor nonzero
            par = np.all(W * vv[0] - vv[None, :] * W[:, [0]] == 0, axis=1)
            ok &= ~par
        if full_spark and pairs:
            cross = vv[pi][None, :] * W[:, pj] - vv[pj][None, :] * W[:, pi]
            ok &= np.all(cross != 0, axis=1)
        return ok

    return _search(P, accept, max_norm, "second-row witness")


def invert_diagram_vector_r2(x: float, y: float) -> np.ndarray:
    """A vector of R^2 whose diagram ``(f1^2 - f2^2, 2 f1 f2)`` is ``(x, y)``."""
    x, y = float(x), float(y)
    rho = math.hypot(x, y)
    if rho == 0.0:
        raise ValidationError("the zero diagram vector belongs to the zero vector")
    phi = math.atan2(y, x)
    s = math.sqrt(rho)
    return np.array([s * math.cos(phi / 2), s * math.sin(phi / 2)])


def frame_from_rows(v: Sequence, w: Sequence | None = None) -> Frame:
    """Planar frame whose diagram vectors are ``(v_i, w_i)`` (or ``(v_i, 0)``).

    With one row, ``v_i > 0`` gives ``sqrt(v_i) e_1`` and ``v_i < 0`` gives
    ``sqrt(|v_i|) e_2``.  With two rows each pair is inverted by
    :func:`invert_diagram_vector_r2`.
    """
    if w is None:
        vecs = []
        for x in v:
            if x == 0:
                raise ValidationError("zero entry in a single-row witness")
            s = math.sqrt(abs(float(x)))
            vecs.append([s, 0.0] if x > 0 else [0.0, s])
        return Frame.from_array(vecs)
    if len(v) != len(w):
        raise ValidationError("rows must have equal length")
    return Frame.from_array([invert_diagram_vector_r2(a, b) for a, b in zip(v, w)])


@dataclass(frozen=True)
class InverseResult:
    frame: Frame
    v: tuple
    w: tuple | None = None

    def diagram_vectors(self) -> list[tuple]:
        if self.w is None:
            return [(a,) for a in self.v]
        return list(zip(self.v, self.w))


def _prepare(P: Poset) -> int:
    _check_singletons(P)
    chk = is_span_closed(P)
    if not chk:
        raise NotSpanClosedError(
            f"poset is not span-closed: {indices_from_mask(chk.witness)} lies in its index span"
        )
    return P.k - index_span(P).dim


def _verify(P: Poset, F: Frame, tol: Tolerance) -> None:
    got = factor_poset(F, tol=tol)
    if got.sets != P.sets:
        raise AssertionError(f"constructed frame has poset {got}, expected {P}")


def inverse_frame_r2(
    P: Poset,
    rows: int = 2,
    *,
    full_spark: bool = False,
    max_norm: int | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> InverseResult:
    """A frame in R^2 whose factor poset is ``P``.

    ``rows=1`` reproduces the axis-aligned construction from a single integer
    vector ``v``; ``rows=2`` (default) uses a second vector ``w`` so the
    diagram vectors ``(v_i, w_i)`` spread over the plane.  The result is
    re-verified before it is returned.
    """
    if rows not in (1, 2):
        raise ValidationError("rows must be 1 or 2")
    if full_spark and rows != 2:
        raise ValidationError("full spark needs the two-row construction")
    if P.k < 1:
        raise ValidationError("empty index set")
    dim_perp = _prepare(P)
    if full_spark:
        obs = full_spark_obstruction(P)
        if not obs.ok:
            i, j, a = obs.pair
            raise ValidationError(
                f"no full spark frame: e_{i} - ({a}) e_{j} lies in the index span"
            )
    if rows == 1:
        v = _find_v(P, True, max_norm)
        F = frame_from_rows(v)
        _verify(P, F, tol)
        return InverseResult(F, v)
    v = _find_v(P, False, max_norm)
    w = _find_w(P, v, full_spark, max_norm, dim_perp)
    F = frame_from_rows(v, w)
    _verify(P, F, tol)
    if full_spark and not is_full_spark(F, tol):
        raise AssertionError("constructed frame is not full spark")
    return InverseResult(F, v, w)


def inverse_full_spark_r2(
    P: Poset, *, max_norm: int | None = None, tol: Tolerance = DEFAULT_TOL
) -> InverseResult:
    return inverse_frame_r2(P, 2, full_spark=True, max_norm=max_norm, tol=tol)


@dataclass(frozen=True)
class FullSparkCheck:
    """``pair = (i, j, alpha)`` with ``e_i - alpha e_j`` in the index span."""

    ok: bool
    pair: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def full_spark_obstruction(P: Poset) -> FullSparkCheck:
    """Look for ``i != j`` and ``alpha > 0`` with ``e_i - alpha e_j`` in ``K``.

    Since the complement basis has full row rank, that happens exactly when
    columns ``i`` and ``j`` of the complement basis are positively parallel.
    """
    _prepare(P)
    cols = index_span(P).complement_columns()
    k = P.k
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            ci, cj = cols[i], cols[j]
            piv = next((t for t in range(len(cj)) if cj[t] != 0), None)
            if piv is None:
                continue
            alpha = ci[piv] / cj[piv]
            if alpha > 0 and all(a == alpha * b for a, b in zip(ci, cj)):
                return FullSparkCheck(False, (i + 1, j + 1, alpha))
    return FullSparkCheck(True)
