from __future__ import annotations

from fractions import Fraction as Fr

import numpy as np
import pytest
from helpers import random_int_frame
from hypothesis import given, settings
from hypothesis import strategies as st

from tightposets.errors import LimitExceededError, ValidationError, ZeroVectorError
from tightposets.factor_poset import (
    Signing,
    all_signings,
    copies_of,
    cover_edges,
    empty_cover,
    factor_poset,
    forced_sign_relations,
    hasse_dot,
    satisfies_closure_condition,
    signing_from_direction,
    strip_zero_vectors,
)
from tightposets.frame import Frame, frame_operator
from tightposets.inverse import index_span
from tightposets.poset import Poset, indices_from_mask
from tightposets.poset import mask_from_indices as M


def sets(P):
    return sorted(map(tuple, P.index_sets()))


def test_cross_example(cross4, cross4_poset):
    P = factor_poset(cross4)
    assert P == cross4_poset
    assert [indices_from_mask(m) for m in empty_cover(P)] == [[1, 2], [1, 4], [2, 3], [3, 4]]


def test_r3_example(r3):
    P = factor_poset(r3)
    assert sets(P) == [(), (1, 2, 3), (1, 4, 5)]
    assert empty_cover(P) == [M([1, 2, 3]), M([1, 4, 5])]


def test_onb_poset():
    F = Frame.exact([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert sets(factor_poset(F)) == [(), (1, 2, 3)]
    assert empty_cover(Poset(3, ())) == []


def test_float_and_mitm_routes(cross4, r3):
    assert factor_poset(cross4.to_float()) == factor_poset(cross4)
    assert factor_poset(r3.to_float()) == factor_poset(r3)
    assert factor_poset(cross4, mitm=True) == factor_poset(cross4)


def test_zero_vectors_and_limits():
    F = Frame.exact([[1, 0], [0, 0], [0, 1], [-1, 0]])
    with pytest.raises(ZeroVectorError):
        factor_poset(F)
    G, kept = strip_zero_vectors(F)
    assert kept == [1, 3, 4]
    assert factor_poset(F, strip_zeros=True) == factor_poset(G)
    big = Frame.exact([[1, 0]] * 25)
    with pytest.raises(LimitExceededError):
        factor_poset(big)


def test_copies():
    P = Poset.from_index_sets(6, [[1, 2, 3], [3, 4], [1, 2, 3, 4], [3, 4, 5, 6]])
    assert copies_of(P, M([1, 2, 3]), M([3, 4])) == (M([1, 2]), M([4]))
    assert copies_of(P, M([3, 4]), M([3, 4])) == (0, 0)
    assert copies_of(P, M([1, 2, 3, 4]), M([3, 4, 5, 6])) == (M([1, 2]), M([5, 6]))


def test_closure_condition_examples():
    P = Poset.from_index_sets(5, [[1, 2, 3], [3, 4], [1, 2, 5]])
    chk = satisfies_closure_condition(P)
    assert not chk and chk.witness == M([4, 5])
    assert satisfies_closure_condition(Poset(3, ()))


def test_signings(cross4):
    P = factor_poset(cross4)
    assert [str(s) for s in all_signings(P)] == ["(+,-,+,-)", "(-,+,-,+)"]
    assert len(all_signings(Poset(3, ()))) == 8
    P12 = Poset.from_index_sets(3, [[1, 2]])
    assert {str(s) for s in all_signings(P12)} == {"(+,-,+)", "(+,-,-)", "(-,+,+)", "(-,+,-)"}


def test_signings_against_brute_force():
    import itertools

    P = Poset.from_index_sets(5, [[1, 2, 3], [1, 4, 5], [2, 3, 4, 5]])
    brute = []
    for signs in itertools.product((1, -1), repeat=5):
        if Signing(signs).is_signing_of(P):
            brute.append(signs)
    assert sorted(s.signs for s in all_signings(P)) == sorted(brute)


def test_signing_from_direction(cross4):
    assert str(signing_from_direction(cross4, [1, 0])) == "(+,-,+,-)"
    with pytest.raises(ValidationError):
        signing_from_direction(cross4, [0, 1])


def test_forced_relations(cross4):
    fs = forced_sign_relations(factor_poset(cross4))
    assert fs.equal_pairs == [(1, 3), (2, 4)]
    assert fs.unequal_pairs == [(1, 2), (1, 4), (2, 3), (3, 4)]
    assert fs.unique_signing
    fs = forced_sign_relations(Poset(2, ()))
    assert fs.equal_pairs == [] and fs.unequal_pairs == [] and not fs.unique_signing
    fs = forced_sign_relations(Poset.from_index_sets(2, [[1, 2]]))
    assert fs.unequal_pairs == [(1, 2)] and fs.unique_signing


def test_hasse(cross4):
    P = Poset.from_index_sets(4, [[1, 2], [3, 4], [1, 2, 3, 4]])
    assert len(cover_edges(P)) == 4
    dot = hasse_dot(P)
    assert dot.count("label=") == 4 and dot.count("->") == 4
    assert hasse_dot(Poset(2, ())).count("label=") == 1
    dot = hasse_dot(factor_poset(cross4))
    assert dot.count("label=") == 6 and dot.count("->") == 8


frames = st.builds(random_int_frame, st.integers(0, 10**6), st.integers(2, 3), st.integers(2, 7))


@settings(max_examples=150, deadline=None)
@given(frames)
def test_poset_properties(F):
    P = factor_poset(F)
    assert 0 in P
    if frame_operator(F).is_tight:
        assert P.full in P
    assert satisfies_closure_condition(P)
    for a in P.nonempty:
        for b in P.nonempty:
            if a & b == 0:
                assert a | b in P
    if satisfies_closure_condition(P):
        ec = Poset(P.k, tuple(empty_cover(P)))
        assert index_span(ec).basis == index_span(P).basis


@settings(max_examples=100, deadline=None)
@given(frames, st.integers(0, 10**6))
def test_direction_signings_are_signings(F, seed):
    P = factor_poset(F)
    rng = np.random.default_rng(seed)
    m = F.n * (F.n - 1)
    tau = [Fr(int(x)) for x in rng.integers(-50, 51, size=m)]
    try:
        s = signing_from_direction(F, tau)
    except ValidationError:
        return
    assert s in all_signings(P)
