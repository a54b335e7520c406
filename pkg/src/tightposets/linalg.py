"""Gauss-Jordan elimination over an exact field from the scalar tower.

Every routine takes plain nested sequences.  Entries must come from a single
exact field: rationals, or rationals mixed with one of ``Q(sqrt d)`` / ``Q(i)``.
Floats are refused.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import GaussRat, variant
from .errors import MixedScalarError, ValidationError

__all__ = [
    "LinearSolution",
    "check_exact_field",
    "rref",
    "rank",
    "nullspace",
    "solve_linear_system_exact",
    "primitive_integer_vector",
    "in_row_space",
]


def check_exact_field(entries) -> str:
    """Return the common field tag ('rational', 'quad', 'gaussian') or raise."""
    kinds = set()
    ds = set()
    for x in entries:
        v = variant(x)
        if v == "float":
            raise MixedScalarError("exact-only operation received a float")
        kinds.add(v)
        if v == "quad":
            ds.add(x.d)
    if "quad" in kinds and "gaussian" in kinds:
        raise MixedScalarError("QuadRat and GaussRat entries in one system")
    if len(ds) > 1:
        raise MixedScalarError(f"several quadratic extensions in one system: {sorted(ds)}")
    if "quad" in kinds:
        return "quad"
    if "gaussian" in kinds:
        return "gaussian"
    return "rational"


def _normalize(x):
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return x


def _copy_matrix(M) -> list[list]:
    rows = [[_normalize(x) for x in row] for row in M]
    if rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValidationError("ragged matrix")
    check_exact_field(x for r in rows for x in r)
    return rows


def rref(M: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns.  Zero rows are dropped."""
    A = _copy_matrix(M)
    if not A:
        return [], []
    n = len(A[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(M) -> int:
    return len(rref(M)[1])


def _canonical_sign(vec):
    for x in vec:
        if x != 0:
            if isinstance(x, GaussRat):
                neg = x.re < 0 or (x.re == 0 and x.im < 0)
            else:
                neg = x < 0
            return [-y for y in vec] if neg else vec
    return vec


def nullspace(M, ncols: int | None = None) -> list[list]:
    """Basis of ``{x : M x = 0}``, one vector per free column.

    Each vector has a 1 in its free column; its sign is flipped so the first
    nonzero entry is positive (for Gaussian entries: positive real part).
    """
    if not M:
        if ncols is None:
            raise ValidationError("nullspace of an empty matrix needs ncols")
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    n = len(M[0]) if ncols is None else ncols
    R, piv = rref(M, n)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(_canonical_sign(v))
    return basis


@dataclass(frozen=True)
class LinearSolution:
    """Outcome of :func:`solve_linear_system_exact`.

    ``status`` is ``"unique"``, ``"none"`` or ``"infinite"``.  For
    ``"infinite"`` the ``solution`` is one particular solution (free variables
    set to zero) and ``kernel`` a basis of the homogeneous solutions.
    """

    status: str
    solution: tuple | None = None
    kernel: tuple = field(default_factory=tuple)


def solve_linear_system_exact(A: Sequence[Sequence], b: Sequence) -> LinearSolution:
    if len(A) != len(b):
        raise ValidationError("A and b have different row counts")
    if not A:
        raise ValidationError("empty system")
    n = len(A[0])
    aug = [list(row) + [rhs] for row, rhs in zip(A, b)]
    R, piv = rref(aug, n + 1)
    if n in piv:
        return LinearSolution("none")
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    kernel = nullspace([row[:n] for row in A], n)
    if kernel:
        return LinearSolution("infinite", tuple(x), tuple(tuple(k) for k in kernel))
    return LinearSolution("unique", tuple(x))


def primitive_integer_vector(vec: Sequence) -> list[int]:
    """Scale a rational vector to coprime integers (sign kept)."""
    fr = [Fraction(x) for x in vec]
    den = 1
    for q in fr:
        den = den * q.denominator // math.gcd(den, q.denominator)
    ints = [int(q * den) for q in fr]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints] if g else ints


def in_row_space(rows: Sequence[Sequence], vec: Sequence) -> bool:
    """Whether ``vec`` is a linear combination of ``rows`` (exact solve)."""
    if not rows:
        return all(x == 0 for x in vec)
    # columns of A are the given rows
    A = [[row[j] for row in rows] for j in range(len(vec))]
    return solve_linear_system_exact(A, list(vec)).status != "none"
