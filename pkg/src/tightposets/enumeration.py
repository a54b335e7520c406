"""Census of planar factor posets and size bounds.

Every factor poset of ``k`` nonzero vectors in R^2 is the zero-sum subset
structure of some integer vector with no zero entries, gcd 1 and entries
bounded by :func:`~tightposets.inverse.witness_bound`.  Because the
structure of a permuted vector is the permuted structure, it is enough to
scan sorted vectors (multisets) and reduce the resulting posets to a
canonical representative under index permutations.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import DEFAULT_TOL, Tolerance, exact_sqrt, rational_parts, to_float
from .errors import LimitExceededError, SearchBoundExceeded, ValidationError
from .factor_poset import empty_cover, factor_poset
from .frame import Frame, diagram_vector
from . import linalg
from .inverse import _find_v, witness_bound
from .poset import Poset, set_sort_key
from .subsetsum import (
    integerize,
    popcount,
    subset_matrix,
    zero_sum_masks_exact,
    zero_sum_masks_mitm,
)

__all__ = [
    "CensusResult",
    "CENSUS_MAX_K",
    "CLOSURE_MAX_K",
    "canonical_form",
    "enumerate_factor_posets_r2",
    "census_by_closure",
    "furedi_bound",
    "check_furedi_bound",
    "conjectured_bound_hn",
    "ec_bound",
    "extremal_ec_frame",
    "asymptotic_ratio",
    "scaled_onb_reduction",
    "ConjectureReport",
    "check_ec_conjecture",
    "check_furedi_census",
]

CENSUS_MAX_K = 7
CLOSURE_MAX_K = 6
_CHUNK = 1 << 16

_perm_cache: dict[int, tuple[np.ndarray, list]] = {}


def _perm_tables(k: int) -> tuple[np.ndarray, list]:
    """``table[p, m]`` = image of mask ``m`` under the ``p``-th permutation."""
    if k not in _perm_cache:
        perms = list(itertools.permutations(range(k)))
        masks = np.arange(1 << k, dtype=np.int64)
        table = np.zeros((len(perms), 1 << k), dtype=np.int64)
        for p, perm in enumerate(perms):
            img = np.zeros_like(masks)
            for i, j in enumerate(perm):
                img |= ((masks >> i) & 1) << j
            table[p] = img
        _perm_cache[k] = (table, perms)
    return _perm_cache[k]


def canonical_form(P: Poset) -> tuple[Poset, tuple]:
    """Representative of ``P`` under index permutations, and the permutation used.

    The representative has the lexicographically smallest sorted list of
    bitmasks; the permutation maps index ``i`` (0-based) to ``perm[i]``.
    """
    k = P.k
    if k > 9:
        raise LimitExceededError("canonical forms are computed for k <= 9")
    table, perms = _perm_tables(k)
    M = np.array(sorted(P.sets), dtype=np.int64)
    images = np.sort(table[:, M], axis=1)
    order = np.lexsort(images.T[::-1])
    best = int(order[0])
    return Poset(k, tuple(int(x) for x in images[best])), perms[best]


def _key(P: Poset) -> tuple:
    return tuple(sorted(P.sets))


@dataclass(frozen=True)
class CensusResult:
    """Canonical planar factor posets on ``k`` indices with integer witnesses.

    ``scan_bound`` is the entry bound used by the integer scan.  Classes the
    scan did not reach (the cited entry bound is not always large enough)
    are listed in ``supplemented``; their witnesses come from
    the single-row witness search of :mod:`tightposets.inverse`.
    """

    k: int
    scan_bound: int
    posets: tuple
    witnesses: tuple
    counts_by_size: dict = field(default_factory=dict)
    supplemented: tuple = ()
    complete: bool = True

    @property
    def count(self) -> int:
        return len(self.posets)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "scan_bound": self.scan_bound,
            "bound_formula": "ceil(2^-(k-1) * k^(k/2))",
            "max_k": CENSUS_MAX_K,
            "complete": self.complete,
            "count": self.count,
            "counts_by_size": {str(s): c for s, c in sorted(self.counts_by_size.items())},
            "supplemented": [P.index_sets() for P in self.supplemented],
            "posets": [
                {"sets": P.index_sets(), "witness": list(w)}
                for P, w in zip(self.posets, self.witnesses)
            ],
        }


def _multisets(values: list[int], k: int, order_seed: int | None):
    it = itertools.combinations_with_replacement(values, k)
    if order_seed is None:
        while True:
            block = list(itertools.islice(it, _CHUNK))
            if not block:
                return
            yield np.array(block, dtype=np.int64)
    else:
        allrows = np.array(list(it), dtype=np.int64)
        rng = np.random.default_rng(order_seed)
        allrows = allrows[rng.permutation(len(allrows))]
        for s in range(0, len(allrows), _CHUNK):
            yield allrows[s : s + _CHUNK]


def _witness_key(a) -> tuple:
    """Preferred witnesses: small sup-norm, then lexicographically largest."""
    return (max(abs(x) for x in a), tuple(-x for x in a))


def _scan_chunk(X: np.ndarray, S: np.ndarray, method: str) -> dict:
    """Zero-sum pattern -> preferred witness, for the rows of ``X``."""
    k = X.shape[1]
    order = np.lexsort([-X[:, c] for c in reversed(range(k))] + [np.abs(X).max(axis=1)])
    X = X[order]
    if method == "vectorized":
        Z = np.packbits((X @ S.T) == 0, axis=1)
        _, first = np.unique(Z, axis=0, return_index=True)
        out = {}
        for i in first:
            pat = tuple(int(m) for m in np.flatnonzero(np.unpackbits(Z[i])[: 1 << k]))
            out[pat] = tuple(int(x) for x in X[i])
        return out
    out = {}
    for row in X:
        pat = tuple(zero_sum_masks_mitm([[int(x)] for x in row]))
        if pat not in out:
            out[pat] = tuple(int(x) for x in row)
    return out


def _supplement_witness(P: Poset) -> tuple:
    return _find_v(P, True, None)


def enumerate_factor_posets_r2(
    k: int,
    *,
    max_k: int = CENSUS_MAX_K,
    method: str = "vectorized",
    order_seed: int | None = None,
    bound: int | None = None,
    complete: bool | None = None,
) -> CensusResult:
    """All planar factor posets on ``k`` indices up to index permutation.

    The integer scan visits every sorted vector with nonzero entries of
    absolute value at most ``bound`` (default :func:`witness_bound`) and gcd 1;
    ``method`` is ``"vectorized"`` (subset-sum matrix product) or ``"mitm"``
    (meet-in-the-middle per vector).  ``order_seed`` shuffles the scan order.
    With ``complete`` (default for ``k <= 6``) the scan is checked against
    :func:`census_by_closure` and any missed class is added with a witness.
    """
    if not 2 <= k <= max_k:
        raise ValidationError(f"census needs 2 <= k <= {max_k}")
    if method not in ("vectorized", "mitm"):
        raise ValidationError(f"unknown method {method!r}")
    if complete is None:
        complete = k <= CLOSURE_MAX_K
    N = witness_bound(k) if bound is None else bound
    values = [v for v in range(-N, N + 1) if v != 0]
    S = subset_matrix(k)
    seen: dict[tuple, tuple] = {}
    for X in _multisets(values, k, order_seed):
        X = X[np.gcd.reduce(np.abs(X), axis=1) == 1]
        if X.shape[0] == 0:
            continue
        for pat, a in _scan_chunk(X, S, method).items():
            cur = seen.get(pat)
            if cur is None or _witness_key(a) < _witness_key(cur):
                seen[pat] = a
    canon: dict[tuple, tuple] = {}
    for pat, a in seen.items():
        C, perm = canonical_form(Poset(k, pat))
        w = [0] * k
        for i, j in enumerate(perm):
            w[j] = a[i]
        w = tuple(w)
        prev = canon.get(_key(C))
        if prev is None or _witness_key(w) < _witness_key(prev[1]):
            canon[_key(C)] = (C, w)
    supplemented = []
    if complete:
        oracle = census_by_closure(k)
        stray = set(canon) - oracle
        if stray:
            raise AssertionError(f"scan produced {len(stray)} non-span-closed classes")
        for key in sorted(oracle - set(canon)):
            C = Poset(k, key)
            canon[key] = (C, _supplement_witness(C))
            supplemented.append(C)

    def order(C: Poset):
        return (len(C), [set_sort_key(m) for m in C.sets])

    items = sorted(canon.values(), key=lambda cw: order(cw[0]))
    counts: dict[int, int] = {}
    for C, _ in items:
        counts[len(C)] = counts.get(len(C), 0) + 1
    return CensusResult(
        k,
        N,
        tuple(c for c, _ in items),
        tuple(w for _, w in items),
        counts,
        tuple(sorted(supplemented, key=order)),
        complete,
    )


def _closure_from_rows(rows: list, k: int, S: np.ndarray) -> list[int]:
    """Masks whose indicator lies in the row space of ``rows``."""
    N = linalg.nullspace(rows, k)
    if not N:
        return list(range(1 << k))
    ints = []
    for v in N:
        den = math.lcm(*(Fraction(x).denominator for x in v))
        ints.append([int(Fraction(x) * den) for x in v])
    C = np.array(ints, dtype=np.int64)
    return [int(m) for m in np.flatnonzero(((S @ C.T) == 0).all(axis=1))]


def census_by_closure(k: int) -> set[tuple]:
    """Independent census: close ``{empty}`` under "add a set, take the span closure".

    Every span-closed poset without singletons is reached, since it is the
    closure of its own elements and intermediate closures stay inside it.
    Returns canonical keys (sorted bitmask tuples).
    """
    if not 1 <= k <= CLOSURE_MAX_K:
        raise ValidationError(f"closure census needs 1 <= k <= {CLOSURE_MAX_K}")
    S = subset_matrix(k)
    start, _ = canonical_form(Poset(k, ()))
    seen = {_key(start)}
    frontier = [start]
    while frontier:
        nxt = []
        for Q in frontier:
            members = set(Q.sets)
            indicator = [[Fraction((m >> i) & 1) for i in range(k)] for m in Q.nonempty]
            basis, _ = linalg.rref(indicator, k)
            for J in range(1, 1 << k):
                if J in members or popcount(J) == 1:
                    continue
                row = [Fraction((J >> i) & 1) for i in range(k)]
                closed = _closure_from_rows(basis + [row], k, S)
                if any(popcount(m) == 1 for m in closed):
                    continue
                C, _ = canonical_form(Poset(k, tuple(closed)))
                key = _key(C)
                if key not in seen:
                    seen.add(key)
                    nxt.append(C)
        frontier = nxt
    return seen


def furedi_bound(k: int) -> int:
    """Largest possible number of zero-sum subsets of ``k`` nonzero reals summing to zero."""
    if k < 2:
        raise ValidationError("k must be at least 2")
    if k % 2 == 0:
        return math.comb(k, k // 2)
    return 2 * math.comb(k - 1, k // 2 - 1)


def check_furedi_bound(P: Poset) -> bool:
    if P.full not in P:
        raise ValidationError("the bound applies to posets of tight frames (full set present)")
    return len(P) <= furedi_bound(P.k)


def conjectured_bound_hn(k: int, n: int) -> int:
    """``sum_i C(m, i)^n`` with ``k = m n``."""
    if n < 1 or k % n:
        raise ValidationError("n must divide k")
    m = k // n
    total = sum(math.comb(m, i) ** n for i in range(m + 1))
    if n == 2:
        assert total == math.comb(2 * m, m)
    return total


def ec_bound(k: int) -> int:
    """Conjectured largest empty cover for planar frames: ``2 C(k-2, floor(k/2-1))``."""
    if k < 2:
        raise ValidationError("k must be at least 2")
    return 2 * math.comb(k - 2, (k - 2) // 2)


def asymptotic_ratio(k: int) -> Fraction:
    """``C(k, floor(k/2)) / (2 C(k-2, floor(k/2-1)))``, which tends to 2."""
    return Fraction(math.comb(k, k // 2), ec_bound(k))


def extremal_ec_frame(k: int) -> Frame:
    """``k-2`` copies of ``e_1`` plus ``-sqrt(floor(k/2-1)) e_2`` and ``-sqrt(ceil(k/2-1)) e_2``.

    Exact (in ``Q(sqrt d)``) whenever both square roots live in one field,
    which always holds for even ``k``; float otherwise.
    """
    if k < 4:
        raise ValidationError("the extremal family starts at k = 4")
    lo, hi = (k - 2) // 2, (k - 1) // 2
    r_lo, r_hi = exact_sqrt(Fraction(lo)), exact_sqrt(Fraction(hi))
    ds = {getattr(r, "d", 1) for r in (r_lo, r_hi)}
    one, zero = Fraction(1), Fraction(0)
    if len(ds - {1}) <= 1:
        d = max(ds)
        vecs = [[one, zero]] * (k - 2) + [[zero, -r_lo], [zero, -r_hi]]
        return Frame.exact(vecs, d=d)
    vecs = [[1.0, 0.0]] * (k - 2) + [[0.0, -math.sqrt(lo)], [0.0, -math.sqrt(hi)]]
    return Frame.from_array(vecs)


def scaled_onb_reduction(
    F: Frame, *, max_coef: int = 64, tol: Tolerance = DEFAULT_TOL
) -> tuple[Frame, tuple[int, int]]:
    """Replace a planar frame by one on the two coordinate axes with the same factor poset.

    Looks for small integers ``(alpha, beta)`` such that ``t_i = alpha d_i +
    beta p_i`` (``(d_i, p_i)`` the diagram vector of ``f_i``) has the same
    zero-sum subsets as the diagram vectors, then maps ``f_i`` to
    ``sqrt(t_i) e_1`` or ``sqrt(-t_i) e_2``.
    """
    if F.field != "real" or F.n != 2:
        raise ValidationError("the reduction is for real frames in R^2")
    target = factor_poset(F, tol=tol)
    dv = [diagram_vector(v, "real") for v in F.vectors]
    pairs = [(dd.diffs[0], dd.prods[0]) for dd in dv]
    for c in range(1, max_coef + 1):
        cands = sorted(
            {(a, b) for a in range(-c, c + 1) for b in range(-c, c + 1) if max(abs(a), abs(b)) == c},
            key=lambda ab: (-ab[0], -ab[1]),
        )
        for a, b in cands:
            t = [a * x + b * y for x, y in pairs]
            if F.is_exact:
                if any(v == 0 for v in t):
                    continue
                rows = []
                for v in t:
                    parts = rational_parts(v)
                    rows.append(list(parts) + [Fraction(0)] * (2 - len(parts)))
                got = zero_sum_masks_exact(integerize(rows))
            else:
                tf = np.array([to_float(v) for v in t], dtype=float)
                if np.any(np.abs(tf) <= tol.absolute):
                    continue
                G = Frame.from_array([[math.sqrt(v), 0.0] if v > 0 else [0.0, math.sqrt(-v)] for v in tf])
                got = list(factor_poset(G, tol=tol).sets)
            if sorted(got) == sorted(target.sets):
                vals = [to_float(v) for v in t]
                G = Frame.from_array(
                    [[math.sqrt(v), 0.0] if v > 0 else [0.0, math.sqrt(-v)] for v in vals]
                )
                if factor_poset(G, tol=tol).sets != target.sets:
                    continue
                return G, (a, b)
    raise SearchBoundExceeded(f"no reducing direction with coefficients up to {max_coef}")


@dataclass(frozen=True)
class ConjectureReport:
    checked: int
    violations: tuple

    @property
    def verdict(self) -> str:
        return "none found" if not self.violations else f"{len(self.violations)} found"


def check_ec_conjecture(census: CensusResult) -> ConjectureReport:
    """Compare every census poset's empty cover with :func:`ec_bound`."""
    bad = tuple(P for P in census.posets if len(empty_cover(P)) > ec_bound(census.k))
    return ConjectureReport(len(census.posets), bad)


def check_furedi_census(census: CensusResult) -> ConjectureReport:
    tight = [P for P in census.posets if P.full in P]
    bad = tuple(P for P in tight if not check_furedi_bound(P))
    return ConjectureReport(len(tight), bad)

