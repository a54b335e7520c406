"""Tabulate the size bounds against the planar census and the extremal family.

Run with ``python demos/bounds_table.py [max_k]`` (default 6).
"""
from __future__ import annotations

import sys

from tightposets import empty_cover, factor_poset
from tightposets.enumeration import (
    asymptotic_ratio,
    ec_bound,
    enumerate_factor_posets_r2,
    extremal_ec_frame,
    furedi_bound,
)


def main(max_k: int = 6) -> None:
    print(f"{'k':>3} {'classes':>8} {'max |P|':>8} {'tight bound':>12} {'max |EC|':>9} {'EC bound':>9}")
    for k in range(2, max_k + 1):
        c = enumerate_factor_posets_r2(k)
        tight = [len(P) for P in c.posets if P.full in P]
        ec = max(len(empty_cover(P)) for P in c.posets)
        print(f"{k:>3} {c.count:>8} {max(tight):>8} {furedi_bound(k):>12} {ec:>9} {ec_bound(k):>9}")
    print()
    print(f"{'k':>3} {'extremal |EC|':>14} {'ratio':>8}")
    for k in (4, 6, 8, 10, 12):
        size = len(empty_cover(factor_poset(extremal_ec_frame(k))))
        print(f"{k:>3} {size:>14} {str(asymptotic_ratio(k)):>8}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 6)
