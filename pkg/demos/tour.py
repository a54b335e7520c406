"""A guided run through the main operations on small frames.

Run with ``python demos/tour.py`` after installing the package.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from tightposets import (
    Frame,
    Poset,
    classify_scaling,
    empty_cover,
    enumerate_factor_posets_r2,
    factor_poset,
    find_tight_projections,
    has_prime_strict_scaling,
    inverse_frame_r2,
    minimal_scalings,
)
from tightposets.arith import QuadRat
from tightposets.poset import indices_from_mask


def show(title: str) -> None:
    print()
    print(title)
    print("-" * len(title))


def main() -> None:
    show("Tight subframes of {e1, e2, -e1, -e2}")
    cross = Frame.exact([[1, 0], [0, 1], [-1, 0], [0, -1]])
    P = factor_poset(cross)
    print("factor poset:", P.index_sets())
    print("empty cover: ", [indices_from_mask(m) for m in empty_cover(P)])

    show("A frame in R^3 with two overlapping tight subframes")
    s, z, o = QuadRat(0, Fraction(1, 2), 2), QuadRat(0, 0, 2), QuadRat(1, 0, 2)
    r3 = Frame.exact([[o, z, z], [z, o, z], [z, z, o], [z, s, s], [z, s, -s]], d=2)
    print("factor poset:", factor_poset(r3).index_sets())

    show("Building a planar frame from a poset")
    target = Poset.from_index_sets(3, [[], [1, 2]])
    res = inverse_frame_r2(target, 1)
    print("integer diagram coordinates:", res.v)
    print("frame vectors:", [[float(x) for x in v] for v in res.frame.vectors])
    print("recovered poset:", factor_poset(res.frame).index_sets())

    show("Minimal scalings of the cross")
    poly = minimal_scalings(cross)
    for v in poly.minimal:
        print("  ", [str(x) for x in v])
    w = tuple(Fraction(1, 4) * sum(col) for col in zip(*poly.minimal))
    print("barycentre", [str(x) for x in w], "->", "prime" if classify_scaling(cross, w).prime else "non-prime")
    strict = has_prime_strict_scaling(cross)
    print("prime strict scaling exists:", strict.value, [str(x) for x in strict.witness])

    show("Hyperplane projections of the frame with operator diag(4, 2, 1)")
    D = Frame.from_array(np.diag(np.sqrt([4.0, 2.0, 1.0])))
    rep = find_tight_projections(D)
    print("case:", rep.case)
    for x, b in zip(rep.normals, rep.tight_bounds):
        print("  normal", np.round(x, 6), "tight bound", round(b, 9))

    show("Planar factor posets up to relabelling")
    for k in range(2, 6):
        c = enumerate_factor_posets_r2(k)
        print(f"  k={k}: {c.count} classes, sizes {dict(sorted(c.counts_by_size.items()))}")


if __name__ == "__main__":
    main()
