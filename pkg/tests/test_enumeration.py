from __future__ import annotations

import math
from fractions import Fraction as Fr

import numpy as np
import pytest
from helpers import random_int_frame, rational_unit_frame
from hypothesis import given, settings
from hypothesis import strategies as st

from tightposets.enumeration import (
    asymptotic_ratio,
    canonical_form,
    census_by_closure,
    check_ec_conjecture,
    check_furedi_bound,
    check_furedi_census,
    conjectured_bound_hn,
    ec_bound,
    enumerate_factor_posets_r2,
    extremal_ec_frame,
    furedi_bound,
    scaled_onb_reduction,
)
from tightposets.errors import LimitExceededError, ValidationError
from tightposets.factor_poset import empty_cover, factor_poset, satisfies_closure_condition
from tightposets.frame import Frame
from tightposets.inverse import frame_from_rows, is_span_closed
from tightposets.poset import Poset

# class counts, frozen after the integer scan (both kernels) and the
# independent span-closure search agreed
COUNTS = {2: 2, 3: 4, 4: 12, 5: 49, 6: 358}


def test_counts(census):
    assert {k: c.count for k, c in census.items()} == COUNTS
    assert all(c.complete for c in census.values())
    assert census[4].supplemented and not census[5].supplemented


def test_scan_matches_closure_without_supplement():
    for k in (2, 3, 5):
        c = enumerate_factor_posets_r2(k, complete=False)
        assert {tuple(sorted(P.sets)) for P in c.posets} == census_by_closure(k)


def test_mitm_route_agrees(census):
    for k in (3, 4, 5):
        c = enumerate_factor_posets_r2(k, method="mitm")
        assert c.posets == census[k].posets and c.witnesses == census[k].witnesses


def test_scan_order_invariance(census):
    c = enumerate_factor_posets_r2(5, order_seed=7)
    assert c.to_json() == census[5].to_json()


def test_witnesses_realize_posets(census):
    for k in (3, 4, 5):
        for P, w in zip(census[k].posets, census[k].witnesses):
            assert all(isinstance(x, int) and x != 0 for x in w)
            assert factor_poset(frame_from_rows(w)).sets == P.sets


def test_census_posets_closed(census):
    for c in census.values():
        for P in c.posets:
            assert is_span_closed(P)
            assert satisfies_closure_condition(P)
            assert canonical_form(P)[0] == P


def test_canonical_form():
    P = Poset.from_index_sets(4, [[], [3, 4]])
    C, perm = canonical_form(P)
    assert C.index_sets() == [[], [1, 2]]
    assert canonical_form(C)[0] == C
    assert sorted(perm) == [0, 1, 2, 3]
    with pytest.raises(LimitExceededError):
        canonical_form(Poset(10, (0,)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_canonical_invariant_under_permutation(seed):
    rng = np.random.default_rng(seed)
    P = factor_poset(random_int_frame(seed, 2, 5))
    p = rng.permutation(5)
    Q = Poset(5, tuple(sum(1 << int(p[i]) for i in range(5) if (m >> i) & 1) for m in P.sets))
    assert canonical_form(P)[0] == canonical_form(Q)[0]


def test_limits():
    with pytest.raises(ValidationError):
        enumerate_factor_posets_r2(8)
    with pytest.raises(ValidationError):
        enumerate_factor_posets_r2(3, method="brute")
    with pytest.raises(ValidationError):
        census_by_closure(7)


def test_furedi(census, cross4_poset):
    assert [furedi_bound(k) for k in range(2, 8)] == [2, 2, 6, 8, 20, 30]
    assert len(cross4_poset) == furedi_bound(4) and check_furedi_bound(cross4_poset)
    with pytest.raises(ValidationError):
        check_furedi_bound(Poset.from_index_sets(3, [[], [1, 2]]))
    for c in census.values():
        rep = check_furedi_census(c)
        assert rep.checked > 0 and rep.verdict == "none found"


def test_ec_conjecture_census(census):
    for c in census.values():
        assert check_ec_conjecture(c).verdict == "none found"


def test_hn_bound():
    assert conjectured_bound_hn(4, 2) == 6
    assert conjectured_bound_hn(6, 3) == 10
    for m in range(1, 8):
        assert conjectured_bound_hn(2 * m, 2) == math.comb(2 * m, m)
    with pytest.raises(ValidationError):
        conjectured_bound_hn(5, 2)


def test_ec_bound_and_ratio():
    assert [ec_bound(k) for k in (4, 5, 6, 8, 10)] == [4, 6, 12, 40, 140]
    ratios = [asymptotic_ratio(k) for k in (8, 12, 16)]
    assert ratios == [Fr(7, 4), Fr(11, 6), Fr(15, 8)]
    assert ratios == sorted(ratios) and all(r < 2 for r in ratios)


@pytest.mark.parametrize("k", [4, 5, 6, 7, 8, 10])
def test_extremal_frames(k):
    F = extremal_ec_frame(k)
    assert len(empty_cover(factor_poset(F))) == ec_bound(k)
    if k % 2 == 0:
        assert F.is_exact


def test_scaled_onb_reduction_examples(cross4):
    G, ab = scaled_onb_reduction(cross4)
    assert factor_poset(G).sets == factor_poset(cross4).sets
    A = G.array()
    assert np.all((A[:, 0] == 0) | (A[:, 1] == 0))
    axes = Frame.exact([[1, 0], [0, 2], [3, 0]])
    G, _ = scaled_onb_reduction(axes)
    assert factor_poset(G).sets == factor_poset(axes).sets


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 6))
def test_scaled_onb_reduction_property(seed, k):
    F = random_int_frame(seed, 2, k) if seed % 2 else rational_unit_frame(seed, k)
    G, _ = scaled_onb_reduction(F)
    A = G.array()
    assert np.all((np.abs(A[:, 0]) < 1e-12) | (np.abs(A[:, 1]) < 1e-12))
    assert factor_poset(G).sets == factor_poset(F).sets


def test_json_shape(census):
    js = census[4].to_json()
    assert js["count"] == 12 and js["complete"]
    assert sum(js["counts_by_size"].values()) == 12
    assert [[], [1, 2, 3]] in [p["sets"] for p in js["posets"]]
    assert len(js["supplemented"]) == 2
