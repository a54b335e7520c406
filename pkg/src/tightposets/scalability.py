"""Scalings of unit-norm real frames.

A *scaling* of ``F = (f_1..f_k)`` is a vector ``w >= 0`` with
``sum_i w_i f_i f_i^T = I_n``; the scaled frame is ``(sqrt(w_i) f_i)``, so
``w`` multiplies the outer products, not the vectors.  For unit-norm frames
the scalings form a polytope whose vertices (the *minimal scalings*) have
pairwise distinct, inclusion-minimal supports.

Diagram vectors are quadratic, so the scaled frame has diagram vectors
``w_i f~_i``; a scaling is *prime* when no proper nonempty part of its
support carries a zero sum of those.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .arith import DEFAULT_TOL, QuadRat, Tolerance, rational_parts, to_float
from .errors import (
    InconclusiveError,
    InfeasibleScalingError,
    LimitExceededError,
    ValidationError,
)
from .frame import Frame, diagram_vector
from .poset import Poset, set_sort_key
from .subsetsum import (
    integerize,
    mask_to_indices,
    zero_sum_masks_exact,
    zero_sum_masks_float,
)

__all__ = [
    "ScalingPolytope",
    "ScalingClass",
    "PrimeStrictResult",
    "is_unit_norm",
    "equality_system",
    "is_scaling",
    "minimal_scalings",
    "support",
    "scalability_poset",
    "scaled_factor_poset",
    "classify_scaling",
    "exists_orthogonal_partition",
    "has_prime_strict_scaling",
    "prime_support_sufficient",
    "random_scaling",
    "search_strict_scaling_with_poset",
    "DEFAULT_SCALING_LIMIT",
]

DEFAULT_SCALING_LIMIT = 14


def _simplify(x):
    """Rational entries of ``Q(sqrt d)`` come back as plain fractions."""
    if isinstance(x, QuadRat) and x.b == 0:
        return x.a
    return x


def _require_real(F: Frame) -> None:
    if F.field != "real":
        raise ValidationError("scalings are handled for real frames only")


def is_unit_norm(F: Frame, tol: Tolerance = DEFAULT_TOL) -> bool:
    _require_real(F)
    for v in F.vectors:
        s = sum((x * x for x in v), Fraction(0) if F.is_exact else 0.0)
        if F.is_exact:
            if s != 1:
                return False
        elif abs(s - 1.0) > tol.threshold(1.0):
            return False
    return True


def _check(F: Frame, limit: int | None, tol: Tolerance) -> None:
    _require_real(F)
    if not is_unit_norm(F, tol):
        raise ValidationError("scalings need a unit-norm frame")
    if limit is not None and F.k > limit:
        raise LimitExceededError(f"{F.k} vectors exceeds the scaling limit {limit}")


def _upper_pairs(n: int):
    return [(a, b) for a in range(n) for b in range(a, n)]


def equality_system(F: Frame) -> tuple[list[list], list]:
    """Rows of ``sum_i w_i f_i f_i^T = I`` over the upper triangle: ``(A, b)``."""
    pairs = _upper_pairs(F.n)
    one = Fraction(1) if F.is_exact else 1.0
    zero = Fraction(0) if F.is_exact else 0.0
    A = [[v[a] * v[b] for v in F.vectors] for a, b in pairs]
    b = [one if a == c else zero for a, c in pairs]
    return A, b


def support(w: Sequence) -> int:
    """Bitmask of the nonzero entries."""
    return sum(1 << i for i, x in enumerate(w) if x != 0)


def is_scaling(F: Frame, w: Sequence, tol: Tolerance = DEFAULT_TOL) -> bool:
    if len(w) != F.k:
        raise ValidationError(f"a scaling of this frame has {F.k} entries")
    A, b = equality_system(F)
    if F.is_exact and all(not isinstance(x, float) for x in w):
        if any(x < 0 for x in w):
            return False
        return all(sum((r * x for r, x in zip(row, w)), Fraction(0)) == rhs for row, rhs in zip(A, b))
    wf = np.array([to_float(x) for x in w], dtype=float)
    if np.any(wf < -tol.absolute):
        return False
    Af = np.array([[to_float(x) for x in row] for row in A], dtype=float)
    return bool(np.abs(Af @ wf - np.array(b, dtype=float)).max() <= tol.threshold(1.0))


@dataclass(frozen=True)
class ScalingPolytope:
    """Vertices (minimal scalings) of the scaling polytope and its equality rows."""

    k: int
    n: int
    minimal: tuple
    equality_rows: tuple
    rhs: tuple

    @property
    def m(self) -> int:
        return len(self.minimal)

    @property
    def supports(self) -> list[int]:
        return [support(v) for v in self.minimal]


def _solve_support_float(Af: np.ndarray, b: np.ndarray, T: tuple, tol: Tolerance):
    sub = Af[:, T]
    if np.linalg.matrix_rank(sub, tol=1e-10) < len(T):
        return None
    x, *_ = np.linalg.lstsq(sub, b, rcond=None)
    if np.abs(sub @ x - b).max() > tol.threshold(1.0):
        return None
    return x


def minimal_scalings(
    F: Frame, *, limit: int = DEFAULT_SCALING_LIMIT, tol: Tolerance = DEFAULT_TOL
) -> ScalingPolytope:
    """Vertices of the scaling polytope by enumerating candidate supports.

    A support ``T`` qualifies when the outer products ``f_i f_i^T``, ``i in T``,
    are linearly independent and the restricted equality system has a
    solution that is positive on ``T``.  Such solutions are exactly the
    vertices, and vertices have inclusion-minimal supports, which the final
    filter re-checks.
    """
    _check(F, limit, tol)
    A, b = equality_system(F)
    r = len(A)
    found: dict[int, tuple] = {}
    Af = None if F.is_exact else np.array(A, dtype=float)
    bf = None if F.is_exact else np.array(b, dtype=float)
    for size in range(1, min(r, F.k) + 1):
        for T in itertools.combinations(range(F.k), size):
            mask = sum(1 << i for i in T)
            if any((s & mask) == s for s in found):
                continue  # cannot be minimal
            if F.is_exact:
                sol = linalg.solve_linear_system_exact([[row[i] for i in T] for row in A], b)
                if sol.status != "unique":
                    continue
                x = [_simplify(v) for v in sol.solution]
                if not all(v > 0 for v in x):
                    continue
            else:
                x = _solve_support_float(Af, bf, T, tol)
                if x is None or not np.all(x > tol.absolute):
                    continue
                x = [float(v) for v in x]
            w = [Fraction(0) if F.is_exact else 0.0] * F.k
            for i, v in zip(T, x):
                w[i] = v
            found[mask] = tuple(w)
    masks = [m for m in found if not any(o != m and (o & m) == o for o in found)]
    masks.sort(key=set_sort_key)
    return ScalingPolytope(
        F.k,
        F.n,
        tuple(found[m] for m in masks),
        tuple(tuple(row) for row in A),
        tuple(b),
    )


def scalability_poset(
    F: Frame,
    *,
    polytope: ScalingPolytope | None = None,
    limit: int = DEFAULT_SCALING_LIMIT,
    tol: Tolerance = DEFAULT_TOL,
) -> Poset:
    """Subsets ``J`` whose subframe admits a scaling: supersets of a vertex support."""
    poly = polytope if polytope is not None else minimal_scalings(F, limit=limit, tol=tol)
    sups = poly.supports
    sets = [J for J in range(1 << F.k) if any((s & J) == s for s in sups)]
    return Poset(F.k, tuple(sets))


def _scaled_rows(F: Frame, w: Sequence, idx: Sequence[int]):
    rows = []
    for i in idx:
        dv = diagram_vector(F.vectors[i], F.field)
        rows.append([w[i] * x for x in dv.diffs + dv.prods])
    return rows


def _zero_sum_subsets(F: Frame, w: Sequence, idx: Sequence[int], tol: Tolerance) -> list[int]:
    """Zero-sum subsets of the scaled diagram vectors, as masks over ``idx`` positions."""
    rows = _scaled_rows(F, w, idx)
    exact = F.is_exact and all(not isinstance(x, float) for x in w)
    if exact:
        split = []
        for row in rows:
            out = []
            for x in row:
                parts = rational_parts(x)
                out.extend(parts if len(parts) == 2 else (parts[0], Fraction(0)))
            split.append(out)
        return zero_sum_masks_exact(integerize(split))
    X = np.array([[to_float(x) for x in row] for row in rows], dtype=float)
    return zero_sum_masks_float(X, tol)


def _lift(mask: int, idx: Sequence[int]) -> int:
    return sum(1 << idx[p] for p in mask_to_indices(mask))


def scaled_factor_poset(F: Frame, w: Sequence, tol: Tolerance = DEFAULT_TOL) -> Poset:
    """Factor poset of the scaled frame ``(sqrt(w_i) f_i)`` for a strict scaling ``w``."""
    if any(x == 0 for x in w):
        raise ValidationError("scaled factor posets need a strict scaling (no zero weights)")
    idx = list(range(F.k))
    return Poset(F.k, tuple(_zero_sum_subsets(F, w, idx, tol)))


@dataclass(frozen=True)
class ScalingClass:
    """``prime`` verdict; for non-prime scalings ``witness`` is a proper tight part of the support."""

    prime: bool
    witness: int | None = None
    tight_parts: tuple = field(default_factory=tuple)


def classify_scaling(F: Frame, w: Sequence, tol: Tolerance = DEFAULT_TOL) -> ScalingClass:
    """Prime or not, by looking for a proper zero-sum part of ``w_i f~_i`` on ``supp(w)``."""
    _check(F, None, tol)
    if not is_scaling(F, w, tol):
        raise InfeasibleScalingError("w is not a scaling of the frame")
    idx = [i for i, x in enumerate(w) if x != 0]
    full = (1 << len(idx)) - 1
    parts = [_lift(m, idx) for m in _zero_sum_subsets(F, w, idx, tol) if m not in (0, full)]
    parts.sort(key=set_sort_key)
    if not parts:
        return ScalingClass(True)
    return ScalingClass(False, parts[0], tuple(parts))


def _in_cone(target: Sequence, gens: list[Sequence]) -> bool:
    """Exact test: is ``target`` a nonnegative combination of ``gens``?

    By Caratheodory it suffices to try linearly independent subsets.
    """
    if all(x == 0 for x in target):
        return True
    if not gens:
        return False
    r = linalg.rank(gens)
    for size in range(1, r + 1):
        for sub in itertools.combinations(range(len(gens)), size):
            cols = [gens[i] for i in sub]
            A = [[c[t] for c in cols] for t in range(len(target))]
            sol = linalg.solve_linear_system_exact(A, list(target))
            if sol.status == "unique" and all(c >= 0 for c in sol.solution):
                return True
    return False


def _in_cone_float(target, gens, tol: Tolerance) -> bool:
    from scipy.optimize import nnls

    if not gens:
        return bool(np.all(np.abs(target) <= tol.absolute))
    A = np.array(gens, dtype=float).T
    _, res = nnls(A, np.asarray(target, dtype=float))
    return res <= tol.threshold(float(np.abs(target).max()))


def exists_orthogonal_partition(
    F: Frame,
    w: Sequence,
    *,
    polytope: ScalingPolytope | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[bool, tuple | None]:
    """Whether ``w`` splits as ``t u + (1 - t) u'`` with ``u, u'`` scalings of disjoint support.

    Works from the minimal scalings alone: for every split of ``supp(w)``
    into two parts, each covered by vertex supports, test whether each
    restriction of ``w`` is a nonnegative combination of the vertices
    supported inside it.  Returns the verdict and the split ``(J, K)``.
    """
    _check(F, DEFAULT_SCALING_LIMIT, tol)
    if not is_scaling(F, w, tol):
        raise InfeasibleScalingError("w is not a scaling of the frame")
    poly = polytope if polytope is not None else minimal_scalings(F, tol=tol)
    exact = F.is_exact and all(not isinstance(x, float) for x in w)
    S = support(w)
    verts = [(support(v), v) for v in poly.minimal if (support(v) & S) == support(v)]
    idx = mask_to_indices(S)

    def covered(J: int) -> list:
        inside = [v for s, v in verts if (s & J) == s]
        cov = 0
        for v in inside:
            cov |= support(v)
        return inside if cov == J else None

    def restricted(J: int):
        return [w[i] if (J >> i) & 1 else 0 for i in range(F.k)]

    for sub in range(1, (1 << len(idx)) - 1):
        J = _lift(sub, idx)
        K = S & ~J
        if J > K:
            continue  # each split once
        gj, gk = covered(J), covered(K)
        if gj is None or gk is None:
            continue
        if exact:
            ok = _in_cone(restricted(J), gj) and _in_cone(restricted(K), gk)
        else:
            ok = _in_cone_float(restricted(J), gj, tol) and _in_cone_float(restricted(K), gk, tol)
        if ok:
            return True, (J, K)
    return False, None


def _components(masks: list[int]) -> list[list[int]]:
    """Connected components of the graph joining masks that intersect."""
    comps: list[list[int]] = []
    seen = [False] * len(masks)
    for s in range(len(masks)):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            a = stack.pop()
            comp.append(a)
            for b in range(len(masks)):
                if not seen[b] and masks[a] & masks[b]:
                    seen[b] = True
                    stack.append(b)
        comps.append(sorted(comp))
    return comps


@dataclass(frozen=True)
class PrimeStrictResult:
    value: bool
    witness: tuple | None = None
    components: tuple = field(default_factory=tuple)


def _combine(verts: list[tuple], alphas: Sequence[Fraction]) -> tuple:
    total = sum(alphas, Fraction(0))
    k = len(verts[0])
    return tuple(
        _simplify(sum((a / total * v[i] for a, v in zip(alphas, verts)), Fraction(0)))
        for i in range(k)
    )


def has_prime_strict_scaling(
    F: Frame, *, seed: int = 0, tries: int = 64, tol: Tolerance = DEFAULT_TOL
) -> PrimeStrictResult:
    """Whether some scaling with full support is prime.

    It exists exactly when the vertex supports cannot be split into two
    groups with disjoint unions, i.e. when their intersection graph is
    connected.  A positive answer comes with a verified prime witness.
    """
    poly = minimal_scalings(F, tol=tol)
    sups = poly.supports
    union = 0
    for s in sups:
        union |= s
    if union != (1 << F.k) - 1:
        raise InfeasibleScalingError("the frame has no strict scaling")
    comps = _components(sups)
    comp_masks = tuple(
        tuple(sorted((sups[i] for i in c), key=set_sort_key)) for c in comps
    )
    if len(comps) > 1:
        return PrimeStrictResult(False, None, comp_masks)
    verts = list(poly.minimal)
    if not F.is_exact:
        verts = [tuple(float(x) for x in v) for v in verts]
    rng = np.random.default_rng(seed)
    for t in range(tries):
        if t == 0:
            alphas = [Fraction(i + 1) for i in range(len(verts))]
        else:
            alphas = [Fraction(int(a), 64) for a in rng.integers(1, 65, size=len(verts))]
        if F.is_exact:
            w = _combine(verts, alphas)
        else:
            al = np.array([float(a) for a in alphas])
            w = tuple(float(x) for x in (al / al.sum()) @ np.array(verts))
        if classify_scaling(F, w, tol).prime:
            return PrimeStrictResult(True, w, comp_masks)
    raise InconclusiveError("no prime strict scaling found among the sampled combinations")


def prime_support_sufficient(
    F: Frame, A: int, *, polytope: ScalingPolytope | None = None, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Sufficient test that every scaling with support exactly ``A`` is prime.

    With ``V_A`` the vertices supported inside ``A``: their support graph is
    connected and no support is covered by the union of the others.
    """
    poly = polytope if polytope is not None else minimal_scalings(F, tol=tol)
    sups = [s for s in poly.supports if (s & A) == s]
    cov = 0
    for s in sups:
        cov |= s
    if not sups:
        raise ValidationError("A is not in the scalability poset")
    if len(_components(sups)) != 1:
        return False
    for j, s in enumerate(sups):
        others = 0
        for i, o in enumerate(sups):
            if i != j:
                others |= o
        if (s & others) == s:
            return False
    return True


def random_scaling(
    poly: ScalingPolytope, rng: np.random.Generator, *, max_den: int = 64, within: int | None = None
) -> tuple:
    """A rational convex combination of vertices with weights ``a/max_den``.

    ``within`` restricts to vertices supported inside that mask.
    """
    verts = [v for v in poly.minimal if within is None or (support(v) & within) == support(v)]
    if not verts:
        raise ValidationError("no vertices to combine")
    alphas = [Fraction(int(a), max_den) for a in rng.integers(1, max_den + 1, size=len(verts))]
    return _combine(verts, alphas)


def search_strict_scaling_with_poset(
    F: Frame,
    P: Poset,
    *,
    max_den: int = 4,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple | None:
    """Look for a strict scaling whose scaled frame has factor poset ``P``.

    Tries every convex combination of the vertices with positive weights
    ``a / max_den``-style integers ``1..max_den`` (normalised).  A returned
    scaling is verified; ``None`` means only that the coarse search failed.
    """
    poly = minimal_scalings(F, tol=tol)
    verts = list(poly.minimal)
    union = 0
    for s in poly.supports:
        union |= s
    if union != (1 << F.k) - 1:
        return None
    for alphas in itertools.product(range(1, max_den + 1), repeat=len(verts)):
        w = _combine(verts, [Fraction(a) for a in alphas])
        if scaled_factor_poset(F, w, tol).sets == P.sets:
            return w
    return None
