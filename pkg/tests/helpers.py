"""Frames and generators shared by the tests."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from tightposets.arith import QuadRat
from tightposets.frame import Frame

HALF = Fraction(1, 2)


def sqrt_half_2():
    """sqrt(2)/2 in Q(sqrt 2)."""
    return QuadRat(0, HALF, 2)


def sqrt3_half():
    return QuadRat(0, HALF, 3)


def r3_example() -> Frame:
    """{e1, e2, e3, (e2+e3)/sqrt2, (e2-e3)/sqrt2} in R^3, exact in Q(sqrt 2)."""
    s = sqrt_half_2()
    z, o = QuadRat(0, 0, 2), QuadRat(1, 0, 2)
    return Frame.exact(
        [[o, z, z], [z, o, z], [z, z, o], [z, s, s], [z, s, -s]], d=2
    )


def hexagon6() -> Frame:
    """Six unit vectors in R^2 with entries +-1/2, +-sqrt3/2 (exact, d=3)."""
    h, r = QuadRat(HALF, 0, 3), sqrt3_half()
    o, z = QuadRat(1, 0, 3), QuadRat(0, 0, 3)
    return Frame.exact([[o, z], [-h, r], [-h, -r], [z, o], [-r, -h], [r, -h]], d=3)


def onb_diag() -> Frame:
    """{e1, e2, (e1+e2)/sqrt2, (e1-e2)/sqrt2}, exact in Q(sqrt 2)."""
    s = sqrt_half_2()
    o, z = QuadRat(1, 0, 2), QuadRat(0, 0, 2)
    return Frame.exact([[o, z], [z, o], [s, s], [s, -s]], d=2)


def random_int_frame(seed: int, n: int, k: int, lo: int = -2, hi: int = 2) -> Frame:
    """Exact frame with small integer entries and no zero vectors."""
    rng = np.random.default_rng(seed)
    while True:
        A = rng.integers(lo, hi + 1, size=(k, n))
        if np.all(np.any(A != 0, axis=1)):
            return Frame.exact(A.tolist())


def rational_unit_frame(seed: int, k: int) -> Frame:
    """Exact unit-norm frame in R^2 from rational points on the circle."""
    rng = np.random.default_rng(seed)
    vecs = []
    for _ in range(k):
        t = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        c, s = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
        sgn = 1 if rng.random() < 0.5 else -1
        vecs.append([sgn * c, sgn * s])
    return Frame.exact(vecs)
