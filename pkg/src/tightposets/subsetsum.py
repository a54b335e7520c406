"""Zero-sum subset enumeration for collections of vectors.

Subsets are bitmasks: bit ``i`` stands for vector ``i`` (0-based).  Every
routine returns a sorted list of masks whose vectors sum to zero, the empty
mask included.

Exact mode works on integer coordinates.  Subset sums are first screened with
a random linear fingerprint mod 2**64 (a true zero sum always fingerprints to
zero) and every surviving candidate is then checked with exact integer
arithmetic, so false positives of the screen never leak into the result.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .arith import DEFAULT_TOL, Tolerance
from .errors import LimitExceededError

__all__ = [
    "integerize",
    "zero_sum_masks_exact",
    "zero_sum_masks_mitm",
    "zero_sum_masks_float",
    "zero_sum_masks_bruteforce",
    "subset_matrix",
    "popcount",
    "mask_to_indices",
    "indices_to_mask",
]

_LOW_BITS = 16
_FINGERPRINT_SEED = 0x7A11_F2A3


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_to_indices(mask: int) -> list[int]:
    """0-based indices of the set bits."""
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def indices_to_mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def subset_matrix(k: int) -> np.ndarray:
    """0/1 matrix of shape (2**k, k); row ``m`` is the indicator of mask ``m``."""
    masks = np.arange(1 << k, dtype=np.int64)
    return ((masks[:, None] >> np.arange(k)) & 1).astype(np.int64)


def integerize(rows: Sequence[Sequence]) -> list[list[int]]:
    """Clear denominators column by column; zero sums are unaffected."""
    rows = [[Fraction(x) for x in r] for r in rows]
    if not rows:
        return []
    m = len(rows[0])
    scale = [1] * m
    for r in rows:
        for c, q in enumerate(r):
            scale[c] = scale[c] * q.denominator // math.gcd(scale[c], q.denominator)
    return [[int(q * scale[c]) for c, q in enumerate(r)] for r in rows]


def _fingerprints(int_rows: list[list[int]]) -> np.ndarray:
    if not int_rows:
        return np.zeros(0, dtype=np.uint64)
    m = len(int_rows[0])
    rng = np.random.default_rng(_FINGERPRINT_SEED)
    weights = [int(w) for w in rng.integers(1, 2**63, size=m, dtype=np.int64)]
    mod = 1 << 64
    return np.array(
        [sum(w * x for w, x in zip(weights, r)) % mod for r in int_rows], dtype=np.uint64
    )


def _all_sums(values: np.ndarray) -> np.ndarray:
    """Subset sums of a 1-D uint64 array indexed by mask (wrapping arithmetic)."""
    out = np.zeros(1 << len(values), dtype=np.uint64)
    for i, v in enumerate(values):
        step = 1 << i
        out[step : 2 * step] = out[:step] + v
    return out


def _verify(int_rows: list[list[int]], masks) -> list[int]:
    if not int_rows:
        return sorted(masks)
    masks = list(masks)
    if not masks:
        return []
    m = len(int_rows[0])
    k = len(int_rows)
    biggest = max((abs(x) for r in int_rows for x in r), default=0)
    if biggest * k < 2**62:
        X = np.array(int_rows, dtype=np.int64).reshape(k, m)
        out = []
        for start in range(0, len(masks), 1 << 16):
            chunk = np.array(masks[start : start + (1 << 16)], dtype=np.int64)
            bits = (chunk[:, None] >> np.arange(k)) & 1
            ok = ~np.any(bits @ X, axis=1)
            out.extend(int(x) for x in chunk[ok])
        return sorted(out)
    out = []
    for mask in masks:
        idx = mask_to_indices(mask)
        if all(sum(int_rows[i][c] for i in idx) == 0 for c in range(m)):
            out.append(mask)
    return sorted(out)


def zero_sum_masks_exact(int_rows: Sequence[Sequence[int]], limit: int = 24) -> list[int]:
    """All zero-sum subsets of integer vectors by a full 2**k scan."""
    int_rows = [list(map(int, r)) for r in int_rows]
    k = len(int_rows)
    if k > limit:
        raise LimitExceededError(f"{k} vectors exceeds the subset-scan limit {limit}")
    h = _fingerprints(int_rows)
    low = min(k, _LOW_BITS)
    low_sums = _all_sums(h[:low])
    high_sums = _all_sums(h[low:])
    cands = []
    for j, hv in enumerate(high_sums):
        hits = np.flatnonzero(low_sums + hv == 0)
        if hits.size:
            cands.extend(int(x) | (j << low) for x in hits)
    return _verify(int_rows, cands)


def zero_sum_masks_mitm(int_rows: Sequence[Sequence[int]], limit: int = 40) -> list[int]:
    """Meet-in-the-middle variant: sort one half's sums, look up negations."""
    int_rows = [list(map(int, r)) for r in int_rows]
    k = len(int_rows)
    if k > limit:
        raise LimitExceededError(f"{k} vectors exceeds the meet-in-the-middle limit {limit}")
    h = _fingerprints(int_rows)
    half = k // 2
    left = _all_sums(h[:half])
    right = _all_sums(h[half:])
    order = np.argsort(right, kind="stable")
    right_sorted = right[order]
    targets = np.zeros_like(left) - left
    lo = np.searchsorted(right_sorted, targets, side="left")
    hi = np.searchsorted(right_sorted, targets, side="right")
    cands = []
    for lm in np.flatnonzero(hi > lo):
        for pos in range(lo[lm], hi[lm]):
            cands.append(int(lm) | (int(order[pos]) << half))
    return _verify(int_rows, cands)


def zero_sum_masks_float(
    X: np.ndarray, tol: Tolerance = DEFAULT_TOL, limit: int = 24
) -> list[int]:
    """Zero-sum subsets of float vectors (rows of ``X``).

    A subset counts as zero-sum when the Euclidean norm of its sum is at most
    ``tol.threshold(s)``, ``s`` being the largest row norm inside the subset.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    k = X.shape[0]
    if k > limit:
        raise LimitExceededError(f"{k} vectors exceeds the subset-scan limit {limit}")
    norms = np.linalg.norm(X, axis=1)
    low = min(k, _LOW_BITS)

    def tables(rows, nrm):
        n = len(rows)
        sums = np.zeros((1 << n, X.shape[1]))
        big = np.zeros(1 << n)
        for i in range(n):
            step = 1 << i
            sums[step : 2 * step] = sums[:step] + rows[i]
            big[step : 2 * step] = np.maximum(big[:step], nrm[i])
        return sums, big

    low_sums, low_big = tables(X[:low], norms[:low])
    high_sums, high_big = tables(X[low:], norms[low:])
    out = []
    for j in range(len(high_sums)):
        s = np.linalg.norm(low_sums + high_sums[j], axis=1)
        scale = np.maximum(low_big, high_big[j])
        thr = np.maximum(tol.absolute, tol.relative * scale)
        hits = np.flatnonzero(s <= thr)
        out.extend(int(x) | (j << low) for x in hits)
    return sorted(out)


def zero_sum_masks_bruteforce(rows: Sequence[Sequence]) -> list[int]:
    """Reference oracle: sum every subset with exact scalar arithmetic."""
    k = len(rows)
    out = [0]
    for size in range(1, k + 1):
        for combo in combinations(range(k), size):
            m = len(rows[0])
            if all(sum((rows[i][c] for i in combo), Fraction(0)) == 0 for c in range(m)):
                out.append(indices_to_mask(combo))
    return sorted(out)
