"""Factor posets of frames, closure checks and signings.

The factor poset of a frame ``F = (f_1..f_k)`` is the family of index sets
``J`` for which ``{f_j : j in J}`` is a tight frame for its span, together
with the empty set.  Equivalently: the reduced diagram vectors indexed by
``J`` sum to zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .arith import DEFAULT_TOL, Tolerance, sign, to_float
from .errors import (
    LimitExceededError,
    NoSigningError,
    ValidationError,
    ZeroVectorError,
)
from .frame import (
    Frame,
    diagram_rows_exact,
    diagram_rows_float,
    diagram_vector,
    zero_vector_indices,
)
from .poset import Poset, indices_from_mask, set_sort_key
from .subsetsum import (
    integerize,
    popcount,
    zero_sum_masks_exact,
    zero_sum_masks_float,
    zero_sum_masks_mitm,
)

__all__ = [
    "factor_poset",
    "strip_zero_vectors",
    "empty_cover",
    "copies_of",
    "ClosureCheck",
    "satisfies_closure_condition",
    "Signing",
    "all_signings",
    "signing_from_direction",
    "ForcedSigns",
    "forced_sign_relations",
    "hasse_dot",
    "DEFAULT_LIMIT",
    "MITM_LIMIT",
]

DEFAULT_LIMIT = 24
MITM_LIMIT = 40


def strip_zero_vectors(F: Frame, tol: Tolerance = DEFAULT_TOL) -> tuple[Frame, list[int]]:
    """Drop zero vectors; return the new frame and the kept 1-based indices."""
    zeros = set(zero_vector_indices(F, tol))
    keep = [i for i in range(F.k) if i not in zeros]
    if not keep:
        raise ZeroVectorError([i + 1 for i in range(F.k)])
    return F.subframe(keep), [i + 1 for i in keep]


def factor_poset(
    F: Frame,
    *,
    limit: int = DEFAULT_LIMIT,
    mitm: bool = False,
    strip_zeros: bool = False,
    tol: Tolerance = DEFAULT_TOL,
) -> Poset:
    """All tight subsets of ``F``.

    Zero vectors are rejected with :class:`ZeroVectorError`; with
    ``strip_zeros=True`` they are removed first and the remaining vectors are
    re-indexed ``1..k'`` in their original order.  Frames with more than
    ``limit`` vectors are refused unless ``mitm`` is set, which switches to a
    meet-in-the-middle subset-sum scan (exact frames, up to 40 vectors).
    """
    zeros = zero_vector_indices(F, tol)
    if zeros:
        if not strip_zeros:
            raise ZeroVectorError([i + 1 for i in zeros])
        F, _ = strip_zero_vectors(F, tol)
    k = F.k
    if k > (MITM_LIMIT if mitm else limit):
        raise LimitExceededError(
            f"frame has {k} vectors; limit is {MITM_LIMIT if mitm else limit}"
            + ("" if mitm else " (meet-in-the-middle raises it to 40)")
        )
    if F.n == 1:
        # every nonempty set of nonzero scalars is a tight frame for R or C
        return Poset(k, tuple(range(1 << k)))
    if F.is_exact:
        rows = integerize(diagram_rows_exact(F))
        if mitm:
            masks = zero_sum_masks_mitm(rows, limit=MITM_LIMIT)
        else:
            masks = zero_sum_masks_exact(rows, limit=limit)
    else:
        if mitm and k > limit:
            raise LimitExceededError("meet-in-the-middle is available for exact frames only")
        masks = zero_sum_masks_float(diagram_rows_float(F), tol, limit=limit)
    return Poset(k, tuple(masks))


def empty_cover(P: Poset) -> list[int]:
    """Minimal nonempty elements of ``P``."""
    nonempty = sorted(P.nonempty, key=set_sort_key)
    out = []
    for m in nonempty:
        if not any((c & m) == c for c in out):
            out.append(m)
    return out


def copies_of(P: Poset, A: int, B: int) -> tuple[int, int]:
    """The pair ``(A \\ B, B \\ A)`` of copies determined by ``A, B in P``."""
    for X in (A, B):
        if X not in P:
            raise ValidationError(f"{indices_from_mask(X)} is not an element of the poset")
    return A & ~B, B & ~A


@dataclass(frozen=True)
class ClosureCheck:
    """Outcome of :func:`satisfies_closure_condition`.

    On failure ``witness`` is the missing set (smallest by size, then
    lexicographically) and ``reason`` names the triple that forces it.
    """

    ok: bool
    witness: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _fmt(mask: int) -> str:
    return "{" + ",".join(map(str, indices_from_mask(mask))) + "}"


def satisfies_closure_condition(P: Poset) -> ClosureCheck:
    """Check the exchange rule for copies and the union/intersection/difference rule.

    Exchange rule: for ``A, B, C in P`` with ``J = A \\ B``, ``K = B \\ A``,
    ``J <= C`` and ``K`` disjoint from ``C``, the set ``(C \\ J) | K`` is in
    ``P``.  Triple rule: for ``A, B in P`` the memberships of ``A | B``,
    ``A & B`` and ``A \\ B`` agree.
    """
    sets = P.sets
    missing: dict[int, str] = {}
    for A in sets:
        for B in sets:
            J, K = A & ~B, B & ~A
            for C in sets:
                if (C & J) == J and not (C & K):
                    X = (C & ~J) | K
                    if X not in P and X not in missing:
                        missing[X] = (
                            f"A={_fmt(A)}, B={_fmt(B)}, C={_fmt(C)} force {_fmt(X)}"
                        )
            trio = (A | B, A & B, A & ~B)
            flags = [t in P for t in trio]
            if any(flags) and not all(flags):
                for t, f in zip(trio, flags):
                    if not f and t not in missing:
                        missing[t] = (
                            f"A={_fmt(A)}, B={_fmt(B)}: union/intersection/difference "
                            f"memberships disagree at {_fmt(t)}"
                        )
    if not missing:
        return ClosureCheck(True)
    w = min(missing, key=set_sort_key)
    return ClosureCheck(False, w, missing[w])


@dataclass(frozen=True)
class Signing:
    """Sign assignment ``signs[i-1] in {+1, -1}`` for indices ``1..k``."""

    signs: tuple

    def __str__(self) -> str:
        return "(" + ",".join("+" if s > 0 else "-" for s in self.signs) + ")"

    def flipped(self) -> "Signing":
        return Signing(tuple(-s for s in self.signs))

    @classmethod
    def parse(cls, text: str) -> "Signing":
        body = text.strip().strip("()").replace(",", "").replace(" ", "")
        if not body or any(c not in "+-" for c in body):
            raise ValidationError(f"cannot parse signing {text!r}")
        return cls(tuple(1 if c == "+" else -1 for c in body))

    def is_signing_of(self, P: Poset) -> bool:
        pos = sum(1 << i for i, s in enumerate(self.signs) if s > 0)
        neg = sum(1 << i for i, s in enumerate(self.signs) if s < 0)
        return all((m & pos) and (m & neg) for m in P.nonempty)


def all_signings(P: Poset, limit: int = DEFAULT_LIMIT) -> list[Signing]:
    """Every signing of ``P``, in lexicographic order with ``+`` before ``-``.

    Only the empty-cover elements need checking: every nonempty element
    contains one of them, and a set holding both signs stays mixed when
    enlarged.
    """
    k = P.k
    if k > limit:
        raise LimitExceededError(f"signing enumeration is limited to {limit} indices")
    constraints = empty_cover(P)
    if any(popcount(c) == 1 for c in constraints):
        return []
    # constraints grouped by their largest index, checked once it is assigned
    by_last: list[list[int]] = [[] for _ in range(k)]
    for c in constraints:
        by_last[c.bit_length() - 1].append(c)
    out: list[Signing] = []
    signs = [0] * k

    def rec(i: int, pos: int, neg: int) -> None:
        if i == k:
            out.append(Signing(tuple(signs)))
            return
        for s in (1, -1):
            signs[i] = s
            p2 = pos | (1 << i) if s > 0 else pos
            n2 = neg | (1 << i) if s < 0 else neg
            if all((c & p2) and (c & n2) for c in by_last[i]):
                rec(i + 1, p2, n2)

    rec(0, 0, 0)
    return out


def signing_from_direction(F: Frame, tau: Sequence, tol: Tolerance = DEFAULT_TOL) -> Signing:
    """Signing ``i -> sign <f~_i, tau>`` induced by a direction in diagram space.

    ``tau`` lives in the realified reduced diagram space: the ``C(n,2)``
    difference coordinates, then the products (complex frames: real parts,
    then imaginary parts).
    """
    coords = []
    for v in F.vectors:
        coords.append(diagram_vector(v, F.field).realified())
    m = len(coords[0])
    if len(tau) != m:
        raise ValidationError(f"direction must have length {m}, got {len(tau)}")
    exact = F.is_exact and all(not isinstance(t, (float, complex)) for t in tau)
    signs = []
    for i, row in enumerate(coords):
        if exact:
            ip = sum((a * t for a, t in zip(row, tau)), 0)
            s = sign(ip)
        else:
            r = np.array([to_float(a) for a in row], dtype=float)
            t = np.array([to_float(x) for x in tau], dtype=float)
            ip = float(r @ t)
            s = sign(ip, tol, float(np.linalg.norm(r) * np.linalg.norm(t)))
        if s == 0:
            raise ValidationError(
                f"direction is orthogonal to the diagram vector of index {i + 1}"
            )
        signs.append(s)
    return Signing(tuple(signs))


@dataclass(frozen=True)
class ForcedSigns:
    equal_pairs: list = field(default_factory=list)
    unequal_pairs: list = field(default_factory=list)
    unique_signing: bool = False


def forced_sign_relations(P: Poset) -> ForcedSigns:
    """Pairs whose signs agree (or differ) under every signing.

    Equal pairs correspond to collinear frame vectors, unequal pairs to
    antiparallel diagram vectors; a unique signing up to global flip means
    all diagram vectors are collinear.
    """
    sigs = all_signings(P)
    if not sigs:
        raise NoSigningError("the poset has no signings")
    eq, ne = [], []
    for i, j in combinations(range(P.k), 2):
        prods = {s.signs[i] * s.signs[j] for s in sigs}
        if prods == {1}:
            eq.append((i + 1, j + 1))
        elif prods == {-1}:
            ne.append((i + 1, j + 1))
    return ForcedSigns(eq, ne, len(sigs) == 2)


def cover_edges(P: Poset) -> list[tuple[int, int]]:
    sets = P.sets
    edges = []
    for b in sets:
        below = [a for a in sets if a != b and (a & b) == a]
        for a in below:
            if not any(c != a and (a & c) == a and (c & b) == c and c != b for c in below):
                edges.append((a, b))
    return edges


def hasse_dot(P: Poset, name: str = "poset") -> str:
    """GraphViz DOT of the cover relation; nodes in poset order."""
    ids = {m: f"n{i}" for i, m in enumerate(P.sets)}
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for m in P.sets:
        lines.append(f'  {ids[m]} [label="{_fmt(m)}"];')
    for a, b in cover_edges(P):
        lines.append(f"  {ids[a]} -> {ids[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
