from __future__ import annotations

import json

import pytest

from tightposets.errors import SingletonError, ValidationError
from tightposets.factor_poset import factor_poset
from tightposets.feasibility import build_feasibility_system, solve_heuristic
from tightposets.frame import Frame
from tightposets.poset import Poset
from tightposets.poset import mask_from_indices as M


def test_system_counts():
    P = Poset(3, (0, M([1, 2])))
    sysm = build_feasibility_system(P, 2)
    # 6 frame entries + 6 non-elements * 2 slack blocks of size 2
    assert sysm.counts() == {
        "variables": 30,
        "equalities": 14,
        "inequalities": 30,
        "complementarity": 12,
        "non_elements": 6,
    }
    json.dumps(sysm.to_json())


def test_system_satisfied_by_realizing_frame(r3):
    P = factor_poset(r3)
    sysm = build_feasibility_system(P, 3)
    x = sysm.point_from_frame(r3.to_float())
    assert sysm.max_violation(x) < 1e-9


def test_system_violated_by_wrong_frame():
    P = Poset(3, (0, M([1, 2])))
    sysm = build_feasibility_system(P, 2)
    F = Frame.from_array([[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]])
    x = sysm.point_from_frame(F)
    assert sysm.max_violation(x) > 1e-3


def test_errors():
    with pytest.raises(SingletonError):
        build_feasibility_system(Poset(2, (0, M([1]))), 2)
    with pytest.raises(ValidationError):
        build_feasibility_system(Poset(2, (0,)), 1)


def test_not_span_closed_inconclusive():
    P = Poset(4, (0, M([1, 2]), M([3, 4])))
    res = solve_heuristic(P, 2, seed=0, restarts=3)
    assert res.status == "inconclusive" and res.frame is None


def test_heuristic_recovers_r3_poset():
    P = Poset(5, (0, M([1, 2, 3]), M([1, 4, 5])))
    res = solve_heuristic(P, 3, seed=0)
    assert res.status == "found"
    assert factor_poset(res.frame).sets == P.sets
