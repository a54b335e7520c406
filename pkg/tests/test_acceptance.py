"""The ten acceptance criteria, each timed against its limit.

Each test records a PASS/FAIL line, printed in the terminal summary.
"""
from __future__ import annotations

import time
from contextlib import contextmanager
from fractions import Fraction as Fr

import numpy as np
import pytest
from helpers import hexagon6, onb_diag, r3_example, random_int_frame

from tightposets.enumeration import (
    check_furedi_bound,
    ec_bound,
    enumerate_factor_posets_r2,
    extremal_ec_frame,
    furedi_bound,
)
from tightposets.factor_poset import empty_cover, factor_poset, satisfies_closure_condition
from tightposets.frame import Frame
from tightposets.inverse import inverse_frame_r2, is_span_closed
from tightposets.poset import Poset, mask_from_indices, popcount
from tightposets.projections import (
    find_tight_projections,
    frame_operator_matrix,
    interlacing_check,
    project_frame,
    reduce_dimension_preserving_poset,
)
from tightposets.scalability import (
    classify_scaling,
    exists_orthogonal_partition,
    has_prime_strict_scaling,
    minimal_scalings,
    random_scaling,
    support,
)

_CENSUS: dict = {}


def census_upto6() -> dict:
    if not _CENSUS:
        _CENSUS.update({k: enumerate_factor_posets_r2(k) for k in range(2, 7)})
    return _CENSUS


@contextmanager
def criterion(record, num: int, title: str, limit: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        secs = time.perf_counter() - start
        ok = ok and secs < limit
        record((num, title, ok, secs, limit))
        print(f"criterion {num}: {'PASS' if ok else 'FAIL'} ({secs:.2f}s / {limit:g}s) {title}")
    assert secs < limit, f"criterion {num} took {secs:.1f}s, limit {limit}s"


def S(*idx) -> int:
    return mask_from_indices(idx)


def test_c01_cross_example(acceptance_record):
    with criterion(acceptance_record, 1, "factor poset of {e1,e2,-e1,-e2}", 1):
        F = Frame.exact([[1, 0], [0, 1], [-1, 0], [0, -1]])
        P = factor_poset(F)
        assert P.sets == Poset(4, (0, S(1, 2), S(2, 3), S(3, 4), S(1, 4), S(1, 2, 3, 4))).sets
        assert set(empty_cover(P)) == {S(1, 2), S(2, 3), S(3, 4), S(1, 4)}


def test_c02_r3_example(acceptance_record):
    with criterion(acceptance_record, 2, "factor poset of the R^3 example", 1):
        assert factor_poset(r3_example()).sets == (0, S(1, 2, 3), S(1, 4, 5))


def test_c03_inverse_round_trip(acceptance_record):
    with criterion(acceptance_record, 3, "inverse round trip over the census, k <= 6", 300):
        n = 0
        for c in census_upto6().values():
            for P in c.posets:
                if any(popcount(m) == 1 for m in P.nonempty):
                    continue
                assert factor_poset(inverse_frame_r2(P).frame).sets == P.sets
                n += 1
        assert n > 0


def test_c04_inverse_witness(acceptance_record):
    with criterion(acceptance_record, 4, "single-row witness for {0,{1,2}}, k=3", 1):
        P = Poset(3, (0, S(1, 2)))
        res = inverse_frame_r2(P, 1)
        assert res.v == (2, -2, 1)
        assert factor_poset(res.frame).sets == P.sets


T = Fr(2, 3)


def test_c05_minimal_scalings(acceptance_record):
    with criterion(acceptance_record, 5, "minimal scalings of the 4- and 6-vector examples", 10):
        F = Frame.exact([[1, 0], [0, 1], [-1, 0], [0, -1]])
        assert set(minimal_scalings(F).minimal) == {
            (1, 1, 0, 0), (0, 0, 1, 1), (1, 0, 0, 1), (0, 1, 1, 0)
        }
        assert set(minimal_scalings(hexagon6()).minimal) == {
            (T, T, T, 0, 0, 0),
            (0, 0, 0, T, T, T),
            (1, 0, 0, 1, 0, 0),
            (0, 1, 0, 0, 1, 0),
            (0, 0, 1, 0, 0, 1),
        }


def _random_points(poly, rng, count):
    sups = [support(v) for v in poly.minimal]
    for _ in range(count):
        pick = rng.random(len(sups)) < 0.5
        if not pick.any():
            pick[rng.integers(len(sups))] = True
        within = 0
        for s, p in zip(sups, pick):
            if p:
                within |= s
        yield random_scaling(poly, rng, within=within)


def test_c06_classification(acceptance_record):
    with criterion(acceptance_record, 6, "scaling classification, two routes on 2x1000 points", 120):
        H = hexagon6()
        hv = [(T, T, T, 0, 0, 0), (0, 0, 0, T, T, T), (1, 0, 0, 1, 0, 0), (0, 1, 0, 0, 1, 0), (0, 0, 1, 0, 0, 1)]
        w2 = tuple(sum(v[i] for v in hv) / 5 for i in range(6))
        c = classify_scaling(H, w2)
        assert not c.prime and c.witness is not None
        alphas = [Fr(1, 15), Fr(2, 15), Fr(3, 15), Fr(4, 15), Fr(5, 15)]
        w1 = tuple(sum(a * v[i] for a, v in zip(alphas, hv)) for i in range(6))
        assert classify_scaling(H, w1).prime
        rng = np.random.default_rng(2024)
        for F in (Frame.exact([[1, 0], [0, 1], [-1, 0], [0, -1]]), H):
            poly = minimal_scalings(F)
            counts = [0, 0]
            for w in _random_points(poly, rng, 1000):
                direct = not classify_scaling(F, w).prime
                split = exists_orthogonal_partition(F, w, polytope=poly)[0]
                assert direct == split, w
                counts[direct] += 1
            assert counts[0] and counts[1]


def test_c07_strict_prime(acceptance_record):
    with criterion(acceptance_record, 7, "prime strict scalings: ONB pair vs cross", 5):
        assert not has_prime_strict_scaling(onb_diag()).value
        res = has_prime_strict_scaling(Frame.exact([[1, 0], [0, 1], [-1, 0], [0, -1]]))
        assert res.value
        F = Frame.exact([[1, 0], [0, 1], [-1, 0], [0, -1]])
        assert classify_scaling(F, res.witness).prime
        assert all(x > 0 for x in res.witness)


def test_c08_projections(acceptance_record):
    with criterion(acceptance_record, 8, "interlacing, diag(4,2,1), poset-preserving reduction", 120):
        rng = np.random.default_rng(8)
        for _ in range(1000):
            n = int(rng.integers(2, 5))
            k = int(rng.integers(n, 8))
            F = Frame.from_array(rng.normal(size=(k, n)))
            x = rng.normal(size=n)
            assert interlacing_check(F, x / np.linalg.norm(x), tol=_tol7())
        D = Frame.from_array(np.diag(np.sqrt([4.0, 2.0, 1.0])))
        rep = find_tight_projections(D)
        assert len(rep.normals) == 2
        for x in rep.normals:
            Sx = frame_operator_matrix(project_frame(D, x))
            assert np.abs(Sx - 2 * np.eye(2)).max() < 1e-7
        assert np.allclose(rep.tight_bounds, [2, 2], atol=1e-7)
        runs = 0
        for seed in range(100):
            rs = np.random.default_rng(10_000 + seed)
            n = int(rs.integers(3, 5))
            F = random_int_frame(10_000 + seed, n, int(rs.integers(n + 1, 8))).to_float()
            target = factor_poset(F)
            G = reduce_dimension_preserving_poset(F, n - 1, seed)
            assert factor_poset(G).sets == target.sets
            runs += 1
        assert runs == 100


def _tol7():
    from tightposets.arith import Tolerance

    return Tolerance(1e-7, 1e-7)


def test_c09_bounds(acceptance_record):
    with criterion(acceptance_record, 9, "tight-size bound on the census; extremal empty covers", 60):
        checked = 0
        for c in census_upto6().values():
            for P in c.posets:
                if P.full in P:
                    assert check_furedi_bound(P)
                    checked += 1
        assert checked > 0
        cross = factor_poset(Frame.exact([[1, 0], [0, 1], [-1, 0], [0, -1]]))
        assert len(cross) == furedi_bound(4)
        for k in (4, 6, 8, 10):
            assert len(empty_cover(factor_poset(extremal_ec_frame(k)))) == ec_bound(k)


def test_c10_necessity(acceptance_record):
    with criterion(acceptance_record, 10, "1000 random exact frames give closed posets", 120):
        rng = np.random.default_rng(10)
        for i in range(1000):
            n = int(rng.integers(2, 4))
            k = int(rng.integers(n, 8))
            P = factor_poset(random_int_frame(int(rng.integers(2**31)), n, k))
            assert is_span_closed(P), P
            assert satisfies_closure_condition(P), P


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_census_is_span_closed(k):
    assert all(is_span_closed(P) for P in census_upto6()[k].posets)
