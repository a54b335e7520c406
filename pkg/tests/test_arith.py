from __future__ import annotations

from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tightposets.arith import (
    GaussRat,
    QuadRat,
    Tolerance,
    exact_sqrt,
    scalar_from_json,
    scalar_is_zero,
    scalar_to_json,
    sign,
    squarefree_part,
)
from tightposets.errors import MixedScalarError, ValidationError

rats = st.fractions(min_value=-50, max_value=50, max_denominator=30)
quads = st.builds(lambda a, b: QuadRat(a, b, 3), rats, rats)
gauss = st.builds(GaussRat, rats, rats)


def test_zero_cases():
    assert scalar_is_zero(Fr(0, 1))
    assert scalar_is_zero(QuadRat(1, 0, 3) - QuadRat(1, 0, 3))
    assert scalar_is_zero(QuadRat(Fr(-3, 4), 0, 3) + QuadRat(Fr(3, 4), 0, 3))


def test_quadratic_product_from_example():
    assert Fr(-1, 2) * QuadRat(0, Fr(1, 2), 3) == QuadRat(0, Fr(-1, 4), 3)
    assert QuadRat(0, 1, 2) * QuadRat(0, 1, 2) == 2


def test_float_zero_uses_tolerance():
    tol = Tolerance(1e-9, 1e-9)
    assert scalar_is_zero(1e-12, tol)
    assert not scalar_is_zero(1e-6, tol)
    assert scalar_is_zero(1e-6, tol, scale=1e4)


def test_mixed_fields_refused():
    with pytest.raises(MixedScalarError):
        QuadRat(1, 1, 2) + QuadRat(1, 1, 3)


def test_sign_of_quadratic_numbers():
    assert QuadRat(1, -1, 2).sign() == -1  # 1 - sqrt2 < 0
    assert QuadRat(-1, 1, 2).sign() == 1
    assert sign(QuadRat(Fr(3, 2), -1, 2)) == 1  # 1.5 > 1.414
    assert sign(QuadRat(0, 0, 5)) == 0


def test_squarefree_and_sqrt():
    assert squarefree_part(12) == 3
    assert squarefree_part(1) == 1
    assert exact_sqrt(Fr(9, 4)) == Fr(3, 2)
    r = exact_sqrt(Fr(3, 4))
    assert r == QuadRat(0, Fr(1, 2), 3)
    assert r * r == Fr(3, 4)
    assert exact_sqrt(-1) is None
    assert exact_sqrt(2, d=3) is None


@given(quads, quads)
def test_quad_field_identities(x, y):
    assert (x + y) - y == x
    if y != 0:
        assert (x * y) / y == x


@given(gauss, gauss)
def test_gaussian_field_identities(x, y):
    assert (x + y) - y == x
    if y != 0:
        assert (x * y) / y == x


@given(rats)
def test_rational_reduction_idempotent(q):
    assert Fr(q.numerator, q.denominator) == q
    assert Fr(Fr(q.numerator, q.denominator)) == q


@given(st.one_of(rats, quads, gauss))
def test_json_round_trip(x):
    assert scalar_from_json(scalar_to_json(x)) == x


def test_json_decoding_rules():
    assert scalar_from_json(3) == Fr(3)
    assert isinstance(scalar_from_json(0.5), float)
    assert scalar_from_json({"num": 1, "den": 3}) == Fr(1, 3)
    assert scalar_from_json({"re": 1, "im": {"num": -1, "den": 2}}) == GaussRat(1, Fr(-1, 2))
    with pytest.raises(ValidationError):
        scalar_from_json({"num": 1, "den": 0})
    with pytest.raises(ValidationError):
        scalar_from_json(True)
