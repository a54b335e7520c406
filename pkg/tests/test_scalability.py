from __future__ import annotations

from fractions import Fraction as Fr

import numpy as np
import pytest
from helpers import hexagon6, onb_diag, rational_unit_frame
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from tightposets.errors import InfeasibleScalingError, ValidationError
from tightposets.factor_poset import empty_cover
from tightposets.frame import Frame
from tightposets.inverse import index_span
from tightposets.linalg import solve_linear_system_exact
from tightposets.poset import mask_from_indices as M
from tightposets.scalability import (
    classify_scaling,
    equality_system,
    exists_orthogonal_partition,
    has_prime_strict_scaling,
    is_scaling,
    is_unit_norm,
    minimal_scalings,
    prime_support_sufficient,
    random_scaling,
    scalability_poset,
    support,
)
from tightposets.frame import diagram_rows_exact

T = Fr(2, 3)
HEX_VERTICES = {
    (T, T, T, 0, 0, 0),
    (0, 0, 0, T, T, T),
    (1, 0, 0, 1, 0, 0),
    (0, 1, 0, 0, 1, 0),
    (0, 0, 1, 0, 0, 1),
}
CROSS_VERTICES = {(1, 1, 0, 0), (0, 0, 1, 1), (1, 0, 0, 1), (0, 1, 1, 0)}


def test_unit_norm(cross4, hex6):
    assert is_unit_norm(cross4)
    assert not is_unit_norm(Frame.exact([[2, 0], [0, 1]]))
    assert is_unit_norm(hex6)


def test_minimal_scalings_examples(cross4, hex6):
    assert set(minimal_scalings(cross4).minimal) == CROSS_VERTICES
    assert set(minimal_scalings(hex6).minimal) == HEX_VERTICES
    onb = Frame.exact([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert minimal_scalings(onb).minimal == ((1, 1, 1),)


def test_float_route_matches_exact(hex6):
    got = minimal_scalings(hex6.to_float())
    want = sorted(minimal_scalings(hex6).minimal)
    assert np.allclose(sorted(got.minimal), np.array(want, dtype=float))


def test_scalability_poset(cross4, hex6):
    P = scalability_poset(cross4)
    assert set(empty_cover(P)) == {M([1, 2]), M([3, 4]), M([1, 4]), M([2, 3])}
    onb = Frame.exact([[1, 0], [0, 1]])
    assert scalability_poset(onb).index_sets() == [[], [1, 2]]
    P = scalability_poset(hex6)
    assert set(empty_cover(P)) == {support(v) for v in HEX_VERTICES}


def _lp_scalable(F: Frame, J: int) -> bool:
    A, b = equality_system(F)
    A = np.array([[float(x) for x in r] for r in A])
    bounds = [(0, None) if (J >> i) & 1 else (0, 0) for i in range(F.k)]
    res = linprog(np.zeros(F.k), A_eq=A, b_eq=np.array(b, dtype=float), bounds=bounds, method="highs")
    return res.status == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 6))
def test_scalability_poset_matches_lp(seed, k):
    F = rational_unit_frame(seed, k)
    P = scalability_poset(F)
    for J in range(1, 1 << k):
        assert (J in P) == _lp_scalable(F, J)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 7))
def test_vertex_properties(seed, k):
    F = rational_unit_frame(seed, k)
    poly = minimal_scalings(F)
    sups = poly.supports
    assert len(set(sups)) == len(sups)
    rows = diagram_rows_exact(F)
    for v in poly.minimal:
        assert is_scaling(F, v)
        # each vertex is orthogonal to every diagram coordinate column
        for c in range(len(rows[0])):
            assert sum(v[i] * rows[i][c] for i in range(k)) == 0
    # no vertex is a convex combination of the others
    for j, v in enumerate(poly.minimal):
        others = [u for i, u in enumerate(poly.minimal) if i != j]
        if not others:
            continue
        A = [[u[i] for u in others] for i in range(k)] + [[Fr(1)] * len(others)]
        b = list(v) + [Fr(1)]
        sol = solve_linear_system_exact(A, b)
        if sol.status == "unique":
            assert any(x < 0 for x in sol.solution)
        else:
            res = linprog(
                np.zeros(len(others)),
                A_eq=np.array(A, dtype=float),
                b_eq=np.array(b, dtype=float),
                bounds=[(0, None)] * len(others),
                method="highs",
            )
            assert sol.status == "none" or res.status != 0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_random_scalings_in_hull(seed):
    F = hexagon6()
    poly = minimal_scalings(F)
    w = random_scaling(poly, np.random.default_rng(seed))
    assert is_scaling(F, w)
    verts = poly.minimal
    A = [[v[i] for v in verts] for i in range(F.k)] + [[Fr(1)] * len(verts)]
    res = linprog(
        np.zeros(len(verts)),
        A_eq=np.array(A, dtype=float),
        b_eq=np.array(list(map(float, w)) + [1.0]),
        bounds=[(0, None)] * len(verts),
        method="highs",
    )
    assert res.status == 0


def test_classification_examples(cross4, hex6):
    a1, a2 = Fr(1, 3), Fr(2, 3)
    w = tuple(a1 * x + a2 * y for x, y in zip((1, 1, 0, 0), (0, 0, 1, 1)))
    assert not classify_scaling(cross4, w).prime
    w2 = tuple(Fr(1, 5) * sum(col) for col in zip(*HEX_VERTICES))
    c = classify_scaling(hex6, w2)
    assert not c.prime and c.witness is not None
    ok, (J, K) = exists_orthogonal_partition(hex6, w2)
    assert ok and {J, K} == {M([1, 2, 3]), M([4, 5, 6])}
    alphas = [Fr(1, 15), Fr(2, 15), Fr(3, 15), Fr(4, 15), Fr(5, 15)]
    hv = [(T, T, T, 0, 0, 0), (0, 0, 0, T, T, T), (1, 0, 0, 1, 0, 0), (0, 1, 0, 0, 1, 0), (0, 0, 1, 0, 0, 1)]
    w1 = tuple(sum(a * u[i] for a, u in zip(alphas, hv)) for i in range(6))
    assert classify_scaling(hex6, w1).prime
    assert not exists_orthogonal_partition(hex6, w1)[0]
    for u in hv:
        assert not exists_orthogonal_partition(hex6, u)[0]
    with pytest.raises(InfeasibleScalingError):
        classify_scaling(hex6, (1, 0, 0, 0, 0, 0))


def test_prime_strict(cross4):
    res = has_prime_strict_scaling(cross4)
    assert res.value and classify_scaling(cross4, res.witness).prime
    assert classify_scaling(cross4, (Fr(1, 4), Fr(1, 2), Fr(3, 4), Fr(1, 2))).prime
    res = has_prime_strict_scaling(onb_diag())
    assert not res.value
    assert set(minimal_scalings(onb_diag()).minimal) == {(1, 1, 0, 0), (0, 0, 1, 1)}
    onb = Frame.exact([[1, 0], [0, 1]])
    assert has_prime_strict_scaling(onb).value


def test_prime_support(hex6):
    assert not prime_support_sufficient(hex6, M([1, 2, 3, 4, 5, 6]))
    onb = Frame.exact([[1, 0], [0, 1]])
    assert prime_support_sufficient(onb, M([1, 2]))
    with pytest.raises(ValidationError):
        prime_support_sufficient(onb, M([1]))


def test_complex_refused():
    from tightposets.arith import GaussRat

    F = Frame.exact([[GaussRat(1, 0), GaussRat(0, 0)], [GaussRat(0, 0), GaussRat(0, 1)]])
    with pytest.raises(ValidationError):
        minimal_scalings(F)


def test_index_span_unused_guard():
    # the scalability poset is upward closed, so its index span is everything
    P = scalability_poset(hexagon6())
    assert index_span(P).dim == 6


def test_search_strict_scaling_with_poset(cross4):
    from tightposets.poset import Poset
    from tightposets.scalability import scaled_factor_poset, search_strict_scaling_with_poset

    P = Poset.from_index_sets(4, [[], [1, 2], [3, 4], [1, 2, 3, 4]])
    w = search_strict_scaling_with_poset(cross4, P)
    assert w is not None and all(x > 0 for x in w)
    assert scaled_factor_poset(cross4, w).sets == P.sets
    # a set that is never tight cannot appear
    Q = Poset.from_index_sets(4, [[], [1, 3], [1, 2, 3, 4]])
    assert search_strict_scaling_with_poset(cross4, Q) is None
