"""Quadratic feasibility system for the inverse problem in R^n, plus a heuristic.

A frame ``f_1..f_k`` in R^n has factor poset ``P`` exactly when

* ``sum_{j in J} f~_j = 0`` for every ``J in P``;
* for every ``J`` not in ``P`` some coordinate of ``sum_{j in J} f~_j`` is
  nonzero.  After rescaling the frame this is ``sum_i |s_Ji| >= 1``, and each
  absolute value is written as ``r+ + r-`` with ``s_Ji = r+ - r-``,
  ``r+, r- >= 0`` and ``r+ r- = 0``.

Here ``f~`` is the normalised real diagram vector of length ``n(n-1)``.  All
constraints are polynomials of degree at most two in the frame entries and
the slack variables.  The coefficients involve ``1/sqrt(n-1)`` and
``sqrt(2n)``, so the system is emitted with float coefficients.

:func:`solve_heuristic` is a best-effort multistart least-squares search.  A
frame it returns has been re-verified with :func:`factor_poset`; when it finds
nothing the answer is *inconclusive*, never "infeasible".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.optimize import least_squares

from .arith import Tolerance
from .errors import SingletonError, ValidationError
from .factor_poset import factor_poset
from .frame import Frame
from .poset import Poset, indices_from_mask, set_sort_key
from .subsetsum import mask_to_indices, popcount

__all__ = [
    "Polynomial",
    "FeasibilitySystem",
    "build_feasibility_system",
    "HeuristicResult",
    "solve_heuristic",
]

# one polynomial = list of (coefficient, tuple of variable indices); the
# tuple has length 0 (constant), 1 (linear) or 2 (quadratic)
Polynomial = list


def _diagram_terms(n: int, var_f) -> list[list[tuple[float, tuple]]]:
    """Quadratic forms of the ``n(n-1)`` full diagram coordinates of one vector."""
    c = 1.0 / math.sqrt(n - 1)
    cp = math.sqrt(2 * n) * c
    pairs = list(combinations(range(n), 2))
    out = []
    for a, b in pairs:
        out.append([(c, (var_f(a), var_f(a))), (-c, (var_f(b), var_f(b)))])
    for a, b in pairs:
        out.append([(cp, tuple(sorted((var_f(a), var_f(b)))))])
    return out


def _poly_json(poly, rhs: float) -> dict:
    return {"terms": [[coef, list(mono)] for coef, mono in poly], "rhs": rhs}


@dataclass
class FeasibilitySystem:
    """Variables and constraints of the quadratic feasibility system.

    Each constraint is ``(poly, rhs)`` meaning ``poly == rhs`` for equalities
    and complementarity rows, ``poly >= rhs`` for inequalities.
    """

    poset: Poset
    n: int
    variables: list = field(default_factory=list)
    equalities: list = field(default_factory=list)
    inequalities: list = field(default_factory=list)
    complementarity: list = field(default_factory=list)
    non_elements: list = field(default_factory=list)

    @property
    def n_frame_vars(self) -> int:
        return self.poset.k * self.n

    def counts(self) -> dict:
        return {
            "variables": len(self.variables),
            "equalities": len(self.equalities),
            "inequalities": len(self.inequalities),
            "complementarity": len(self.complementarity),
            "non_elements": len(self.non_elements),
        }

    @staticmethod
    def _eval(poly, x) -> float:
        total = 0.0
        for coef, mono in poly:
            term = coef
            for v in mono:
                term *= x[v]
            total += term
        return total

    def max_violation(self, x) -> float:
        """Largest constraint violation at the point ``x`` (0 when feasible)."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        for poly, rhs in self.equalities + self.complementarity:
            worst = max(worst, abs(self._eval(poly, x) - rhs))
        for poly, rhs in self.inequalities:
            worst = max(worst, rhs - self._eval(poly, x))
        return worst

    def point_from_frame(self, F: Frame) -> np.ndarray:
        """Frame entries plus slacks; the frame is rescaled so every
        non-element has ``sum_i |s_Ji| >= 1``."""
        A = F.array().real
        if A.shape != (self.poset.k, self.n):
            raise ValidationError("frame shape does not match the system")

        def sums(A):
            D = np.array([_full_real_diagram(row) for row in A])
            return {J: D[mask_to_indices(J)].sum(axis=0) for J in self.non_elements}

        s = sums(A)
        smallest = min((np.abs(v).sum() for v in s.values()), default=1.0)
        if smallest <= 0:
            raise ValidationError("frame does not realize the poset")
        if smallest < 1:
            A = A / math.sqrt(smallest)
            s = sums(A)
        x = list(A.reshape(-1))
        for J in self.non_elements:
            v = s[J]
            x.extend(np.maximum(v, 0.0))
            x.extend(np.maximum(-v, 0.0))
        return np.array(x)

    def to_json(self) -> dict:
        return {
            "poset": self.poset.to_json(),
            "n": self.n,
            "variables": self.variables,
            "equalities": [_poly_json(p, r) for p, r in self.equalities],
            "inequalities": [_poly_json(p, r) for p, r in self.inequalities],
            "complementarity": [_poly_json(p, r) for p, r in self.complementarity],
        }


def _full_real_diagram(f) -> np.ndarray:
    n = len(f)
    c = 1.0 / math.sqrt(n - 1)
    pairs = list(combinations(range(n), 2))
    d = [f[a] ** 2 - f[b] ** 2 for a, b in pairs]
    p = [math.sqrt(2 * n) * f[a] * f[b] for a, b in pairs]
    return c * np.array(d + p)


def build_feasibility_system(P: Poset, n: int) -> FeasibilitySystem:
    """The quadratic system whose solutions are frames in R^n with factor poset ``P``."""
    if n < 2:
        raise ValidationError("the system needs dimension n >= 2")
    singles = [indices_from_mask(m)[0] for m in P.nonempty if popcount(m) == 1]
    if singles:
        raise SingletonError(f"singleton(s) {singles} in the poset")
    k = P.k
    sysm = FeasibilitySystem(P, n)
    for i in range(1, k + 1):
        for j in range(1, n + 1):
            sysm.variables.append(f"f[{i}][{j}]")
    diag = [_diagram_terms(n, lambda a, i=i: i * n + a) for i in range(k)]
    m = n * (n - 1)

    def summed(J: int, coord: int) -> list:
        return [t for j in mask_to_indices(J) for t in diag[j][coord]]

    for J in P.nonempty:
        for c in range(m):
            sysm.equalities.append((summed(J, c), 0.0))
    non_elements = sorted((J for J in range(1, 1 << k) if J not in P), key=set_sort_key)
    sysm.non_elements = non_elements
    for J in non_elements:
        label = ",".join(map(str, indices_from_mask(J)))
        base = len(sysm.variables)
        for c in range(m):
            sysm.variables.append(f"rp[{label}][{c + 1}]")
        for c in range(m):
            sysm.variables.append(f"rm[{label}][{c + 1}]")
        rp = [base + c for c in range(m)]
        rm = [base + m + c for c in range(m)]
        sysm.inequalities.append(
            ([(1.0, (v,)) for v in rp] + [(1.0, (v,)) for v in rm], 1.0)
        )
        for c in range(m):
            sysm.equalities.append(
                (summed(J, c) + [(-1.0, (rp[c],)), (1.0, (rm[c],))], 0.0)
            )
        for c in range(m):
            sysm.inequalities.append(([(1.0, (rp[c],))], 0.0))
            sysm.inequalities.append(([(1.0, (rm[c],))], 0.0))
        for c in range(m):
            sysm.complementarity.append(([(1.0, (rp[c], rm[c]))], 0.0))
    return sysm


@dataclass(frozen=True)
class HeuristicResult:
    """``status`` is ``"found"`` (frame verified) or ``"inconclusive"``."""

    status: str
    frame: Frame | None = None
    attempts: int = 0
    residual: float | None = None


def _reduced_rows(X: np.ndarray) -> np.ndarray:
    n = X.shape[1]
    ii, jj = map(list, zip(*combinations(range(n), 2)))
    sq = X**2
    return np.hstack([sq[:, ii] - sq[:, jj], X[:, ii] * X[:, jj]])


def solve_heuristic(
    P: Poset,
    n: int,
    *,
    seed: int = 0,
    restarts: int = 20,
    tol: Tolerance = Tolerance(1e-8, 1e-8),
) -> HeuristicResult:
    """Multistart least squares on the equality residuals plus hinge penalties.

    For ``J in P`` the residual is the summed reduced diagram vector; for
    ``J`` outside ``P`` it is ``max(0, 1 - |s_J|^2)``.  Every candidate is
    checked with :func:`factor_poset`; only verified frames are returned.
    """
    if n < 2:
        raise ValidationError("n must be at least 2")
    singles = [m for m in P.nonempty if popcount(m) == 1]
    if singles:
        raise SingletonError("posets with singletons have no frame without zero vectors")
    k = P.k
    inside = np.array(
        [[(J >> i) & 1 for i in range(k)] for J in P.nonempty], dtype=float
    ).reshape(-1, k)
    outside = np.array(
        [[(J >> i) & 1 for i in range(k)] for J in range(1, 1 << k) if J not in P],
        dtype=float,
    ).reshape(-1, k)

    def resid(x):
        D = _reduced_rows(x.reshape(k, n))
        r_in = (inside @ D).reshape(-1)
        S_out = outside @ D
        r_out = np.maximum(0.0, 1.0 - np.sum(S_out**2, axis=1))
        return np.concatenate([r_in, r_out])

    rng = np.random.default_rng(seed)
    best = None
    for attempt in range(1, restarts + 1):
        x0 = rng.normal(size=k * n) * 2.0
        sol = least_squares(resid, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=4000)
        res = float(np.linalg.norm(resid(sol.x)))
        best = res if best is None else min(best, res)
        X = sol.x.reshape(k, n)
        if np.any(np.linalg.norm(X, axis=1) < 1e-6):
            continue
        F = Frame.from_array(X)
        try:
            got = factor_poset(F, tol=tol)
        except ValidationError:
            continue
        if got.sets == P.sets:
            return HeuristicResult("found", F, attempt, res)
    return HeuristicResult("inconclusive", None, restarts, best)
