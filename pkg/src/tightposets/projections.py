"""Rank n-1 orthogonal projections of frames.

The frame operator's spectrum decides which hyperplanes a non-tight frame can
be projected onto while becoming tight.  Writing ``lambda_1 >= ... >=
lambda_n`` with eigenvectors ``eta_i``, a projection onto ``x^perp`` can only
be tight when the middle eigenvalues ``lambda_2..lambda_{n-1}`` coincide (for
n >= 4) at some ``lambda``; with ``a = lambda_1 - lambda`` and ``b = lambda -
lambda_n`` the tight hyperplanes have normals

* ``(sqrt(a) eta_1 +- sqrt(b) eta_n) / sqrt(a + b)`` when ``a, b > 0`` (real);
* ``eta_1`` when ``b = 0`` and ``eta_n`` when ``a = 0``;
* in the complex two-sided case a circle of normals inside
  ``span{eta_1, eta_n}``.

Every normal reported here is re-checked by projecting the frame.  All of
this is floating point; exact frames are refused where an eigendecomposition
is needed.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .arith import DEFAULT_TOL, Tolerance
from .errors import InconclusiveError, ValidationError, ZeroVectorError
from .factor_poset import factor_poset
from .frame import Frame, spans_space
from .poset import Poset
from .subsetsum import popcount

__all__ = [
    "ProjectionReport",
    "lambda_F",
    "frame_operator_matrix",
    "hyperplane_basis",
    "project_frame",
    "find_tight_projections",
    "interlacing_check",
    "reduce_dimension_preserving_poset",
    "dimension_upper_bound",
    "IntersectionTrial",
    "intersection_dimension_search",
    "MIDDLE_RTOL",
]

MIDDLE_RTOL = 1e-7
_BORDERLINE_RTOL = 1e-4


def _require_float(F: Frame, what: str) -> None:
    if F.is_exact:
        raise ValidationError(
            f"{what} works in floating point; convert the frame with Frame.to_float()"
        )


def frame_operator_matrix(F: Frame) -> np.ndarray:
    """``S = sum_i f_i f_i^*`` as a float (Hermitian) matrix."""
    A = F.array()
    return A.T @ A.conj()


def _spectrum(S: np.ndarray):
    w, V = np.linalg.eigh(S)
    return w[::-1].real, V[:, ::-1]


def lambda_F(F: Frame, x, tol: Tolerance = DEFAULT_TOL) -> float:
    """``<S x, x>`` for a unit vector ``x``."""
    x = np.asarray(x, dtype=complex if F.field == "complex" else float)
    if x.shape != (F.n,):
        raise ValidationError(f"x must have length {F.n}")
    if abs(np.linalg.norm(x) - 1.0) > max(tol.absolute, 1e-9):
        raise ValidationError("x must be a unit vector")
    S = frame_operator_matrix(F)
    return float(np.real(np.vdot(x, S @ x)))


def hyperplane_basis(normal) -> np.ndarray:
    """Orthonormal basis (as columns) of ``normal^perp``.

    Gram-Schmidt on the coordinate vectors, skipping the coordinate where the
    normal is largest in modulus, so the result is deterministic.
    """
    u = np.asarray(normal)
    nrm = np.linalg.norm(u)
    if nrm == 0:
        raise ValidationError("normal vector is zero")
    u = u / nrm
    n = u.size
    pivot = int(np.argmax(np.abs(u)))
    dtype = complex if np.iscomplexobj(u) else float
    basis = [u.astype(dtype)]
    for j in range(n):
        if j == pivot:
            continue
        e = np.zeros(n, dtype=dtype)
        e[j] = 1.0
        for q in basis:
            e = e - np.vdot(q, e) * q
        e = e / np.linalg.norm(e)
        basis.append(e)
    return np.array(basis[1:]).T


def project_frame(F: Frame, normal) -> Frame:
    """Project every vector onto ``normal^perp`` and write it in :func:`hyperplane_basis`."""
    if F.n < 2:
        raise ValidationError("projection needs n >= 2")
    normal = np.asarray(normal)
    if normal.shape != (F.n,):
        raise ValidationError(f"normal must have length {F.n}")
    B = hyperplane_basis(normal)
    A = F.array()
    coords = A @ B.conj()
    if F.field == "real":
        coords = coords.real
    return Frame.from_array(coords)


def _is_tight_float(F: Frame, tol: Tolerance) -> tuple[bool, float]:
    S = frame_operator_matrix(F)
    lam = float(np.real(np.trace(S))) / F.n
    scale = float(np.max(np.abs(S))) if S.size else 1.0
    return bool(np.abs(S - lam * np.eye(F.n)).max() <= tol.threshold(scale)), lam


@dataclass(frozen=True)
class ProjectionReport:
    """Spectrum, case tag and verified tight-making normals.

    ``case`` is one of ``all-projections-tight``, ``two-tight-subspaces``,
    ``one-tight-subspace``, ``none`` or ``complex-family``.  For the complex
    family, ``family_basis`` spans the plane containing every tight normal
    and ``normals`` holds two verified members of the family.
    """

    eigenvalues: tuple
    case: str
    normals: list = field(default_factory=list)
    tight_bounds: list = field(default_factory=list)
    family_basis: list = field(default_factory=list)


def find_tight_projections(F: Frame, tol: Tolerance = Tolerance(1e-8, 1e-8)) -> ProjectionReport:
    _require_float(F, "find_tight_projections")
    n = F.n
    if n < 3:
        raise ValidationError("tight projections are classified for n >= 3")
    lam_all, V = _spectrum(frame_operator_matrix(F))
    eig = tuple(float(x) for x in lam_all)
    top = max(abs(eig[0]), 1e-300)
    if eig[0] - eig[-1] <= tol.threshold(top):
        return ProjectionReport(eig, "all-projections-tight")
    middle = lam_all[1 : n - 1]
    spread = float(middle.max() - middle.min())
    if spread > MIDDLE_RTOL * top:
        if spread <= _BORDERLINE_RTOL * top:
            warnings.warn(
                "middle eigenvalues nearly coincide; treating them as distinct",
                RuntimeWarning,
                stacklevel=2,
            )
        return ProjectionReport(eig, "none")
    lam = float(middle.mean())
    a = max(0.0, eig[0] - lam)
    b = max(0.0, lam - eig[-1])
    eps = MIDDLE_RTOL * top
    eta1, etan = V[:, 0], V[:, n - 1]
    if b <= eps:
        cands, case = [eta1], "one-tight-subspace"
    elif a <= eps:
        cands, case = [etan], "one-tight-subspace"
    else:
        sa, sb = math.sqrt(a), math.sqrt(b)
        norm = math.sqrt(a + b)
        cands = [(sa * eta1 + sb * etan) / norm, (sa * eta1 - sb * etan) / norm]
        case = "complex-family" if F.field == "complex" else "two-tight-subspaces"
    normals, bounds = [], []
    for x in cands:
        ok, bound = _is_tight_float(project_frame(F, x), tol)
        if not ok:
            raise InconclusiveError(
                "a predicted tight projection failed re-verification; loosen the tolerance"
            )
        normals.append(x)
        bounds.append(bound)
    basis = [eta1, etan] if case == "complex-family" else []
    return ProjectionReport(eig, case, normals, bounds, basis)


def interlacing_check(F: Frame, normal, tol: Tolerance = Tolerance(1e-8, 1e-8)) -> bool:
    """Whether the projected spectrum interlaces the original one."""
    _require_float(F, "interlacing_check")
    lam, _ = _spectrum(frame_operator_matrix(F))
    mu, _ = _spectrum(frame_operator_matrix(project_frame(F, normal)))
    slack = tol.threshold(max(abs(lam[0]), 1e-300))
    return all(lam[i] + slack >= mu[i] >= lam[i + 1] - slack for i in range(F.n - 1))


def _random_normal(rng: np.random.Generator, n: int, complex_field: bool) -> np.ndarray:
    x = rng.normal(size=n)
    if complex_field:
        x = x + 1j * rng.normal(size=n)
    return x / np.linalg.norm(x)


def reduce_dimension_preserving_poset(
    F: Frame,
    ell: int,
    seed: int,
    *,
    attempts: int = 32,
    tol: Tolerance = Tolerance(1e-8, 1e-8),
) -> Frame:
    """Project down to dimension ``ell`` one random hyperplane at a time, keeping the factor poset.

    Exact frames are converted to floating point first.
    """
    if not 2 <= ell <= F.n:
        raise ValidationError(f"target dimension must satisfy 2 <= ell <= {F.n}")
    G = F.to_float()
    target = factor_poset(G, tol=tol)
    rng = np.random.default_rng(seed)
    while G.n > ell:
        for _ in range(attempts):
            x = _random_normal(rng, G.n, G.field == "complex")
            H = project_frame(G, x)
            try:
                got = factor_poset(H, tol=tol)
            except ZeroVectorError:
                continue
            if got.sets == target.sets:
                G = H
                break
        else:
            raise InconclusiveError(
                f"no poset-preserving projection from dimension {G.n} in {attempts} attempts"
            )
    return G


def dimension_upper_bound(P: Poset) -> int:
    """Smallest nonempty element size: no frame of larger dimension realizes ``P``."""
    if not P.nonempty:
        raise ValidationError("the poset has no nonempty element")
    return min(popcount(m) for m in P.nonempty)


@dataclass(frozen=True)
class IntersectionTrial:
    """One probe of the lower bound for the dimension of ``P1 & P2``."""

    dims: tuple
    intersection: Poset
    upper_bound: int
    status: str  # "counterexample", "supported" or "unresolved"


def intersection_dimension_search(
    pairs,
    *,
    seed: int = 0,
    restarts: int = 8,
    tol: Tolerance = Tolerance(1e-8, 1e-8),
) -> list[IntersectionTrial]:
    """Probe the conjectured bound ``D(P1 & P2) >= min(D(P1), D(P2))``.

    ``pairs`` holds frames ``(F, G)`` on the same index set.  Each spans its
    space, so ``D(P_i) >= dim``.  A certified counterexample is reported when
    the intersection's smallest element is below ``min(dims)``; otherwise the
    heuristic solver tries to realize the intersection in that dimension
    (``supported`` on success, ``unresolved`` otherwise).
    """
    from .feasibility import solve_heuristic

    out = []
    for F, G in pairs:
        if F.k != G.k:
            raise ValidationError("frames must have the same number of vectors")
        for X in (F, G):
            if not spans_space(X, tol):
                raise ValidationError("frames must span their spaces")
        P1, P2 = factor_poset(F, tol=tol), factor_poset(G, tol=tol)
        inter = Poset(F.k, tuple(set(P1.sets) & set(P2.sets)))
        d = min(F.n, G.n)
        ub = dimension_upper_bound(inter) if inter.nonempty else F.k
        if ub < d:
            status = "counterexample"
        elif d < 2:
            status = "supported"
        else:
            res = solve_heuristic(inter, d, seed=seed, restarts=restarts, tol=tol)
            ok = res.status == "found" and spans_space(res.frame, tol)
            status = "supported" if ok else "unresolved"
        out.append(IntersectionTrial((F.n, G.n), inter, ub, status))
    return out

