"""Scalar tower used throughout the package.

Four variants are supported:

* ``Fraction`` (stdlib) for rationals,
* :class:`GaussRat` for Gaussian rationals ``re + im*i``,
* :class:`QuadRat` for ``a + b*sqrt(d)`` with a square-free ``d > 1``,
* plain ``float`` / ``complex`` for tolerance-compared floating point.

Exact variants are closed under field operations.  Combining an exact value
with a float, a ``QuadRat`` with a ``GaussRat``, or two ``QuadRat`` values with
different ``d`` raises :class:`MixedScalarError`.  Rationals embed into both
extensions and mix freely with them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import MixedScalarError, ValidationError

__all__ = [
    "Fraction",
    "QuadRat",
    "GaussRat",
    "Scalar",
    "Tolerance",
    "DEFAULT_TOL",
    "as_fraction",
    "variant",
    "is_exact",
    "scalar_is_zero",
    "sign",
    "to_float",
    "conj",
    "abs2",
    "squarefree_part",
    "exact_sqrt",
    "rational_parts",
    "scalar_to_json",
    "scalar_from_json",
]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise MixedScalarError(f"expected a rational, got {type(x).__name__}")


def _is_rat(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def squarefree_part(n: int) -> int:
    """Square-free part of a positive integer (``12 -> 3``)."""
    if n <= 0:
        raise ValidationError("squarefree_part needs a positive integer")
    out, p = 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
        if n % p == 0:
            out *= p
            n //= p
        p += 1
    return out * n


class QuadRat:
    """Element ``a + b*sqrt(d)`` of the real quadratic field Q(sqrt d)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 2):
        if not isinstance(d, int) or d < 2 or squarefree_part(d) != d:
            raise ValidationError(f"d must be a square-free integer > 1, got {d!r}")
        self.a = as_fraction(a)
        self.b = as_fraction(b)
        self.d = d

    def _lift(self, other) -> "QuadRat":
        if isinstance(other, QuadRat):
            if other.d != self.d:
                raise MixedScalarError(f"Q(sqrt {self.d}) mixed with Q(sqrt {other.d})")
            return other
        if _is_rat(other):
            return QuadRat(other, 0, self.d)
        raise MixedScalarError(f"cannot combine QuadRat with {type(other).__name__}")

    def __add__(self, other):
        o = self._lift(other)
        return QuadRat(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadRat(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        return QuadRat(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return QuadRat(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate_field(self) -> "QuadRat":
        """Galois conjugate ``a - b*sqrt(d)``."""
        return QuadRat(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "QuadRat":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("QuadRat division by zero")
        return QuadRat(self.a / nrm, -self.b / nrm, self.d)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: the larger magnitude wins
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def __eq__(self, other):
        if isinstance(other, QuadRat):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if _is_rat(other):
            return self.b == 0 and self.a == other
        if isinstance(other, GaussRat):
            return self.b == 0 and other.im == 0 and self.a == other.re
        return NotImplemented

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadRat({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"sqrt({self.d})" if self.b == 1 else f"{self.b}*sqrt({self.d})"
        if self.a == 0:
            return root
        return f"{self.a}+{root}"


class GaussRat:
    """Gaussian rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = as_fraction(re)
        self.im = as_fraction(im)

    @staticmethod
    def _lift(other) -> "GaussRat":
        if isinstance(other, GaussRat):
            return other
        if _is_rat(other):
            return GaussRat(other, 0)
        raise MixedScalarError(f"cannot combine GaussRat with {type(other).__name__}")

    def __add__(self, other):
        o = self._lift(other)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = self._lift(other)
        den = o.abs2()
        if den == 0:
            raise ZeroDivisionError("GaussRat division by zero")
        num = self * o.conjugate()
        return GaussRat(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if _is_rat(other):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"


Scalar = Union[Fraction, QuadRat, GaussRat, float, complex]


@dataclass(frozen=True)
class Tolerance:
    """Zero test thresholds for float mode: ``|x| <= max(absolute, relative*scale)``."""

    absolute: float = 1e-9
    relative: float = 1e-9

    def __post_init__(self):
        if self.absolute < 0 or self.relative < 0:
            raise ValidationError("tolerances must be nonnegative")

    def threshold(self, scale: float = 1.0) -> float:
        return max(self.absolute, self.relative * scale)


DEFAULT_TOL = Tolerance()


def variant(x) -> str:
    if isinstance(x, bool):
        raise MixedScalarError("booleans are not scalars")
    if isinstance(x, (Fraction, int)):
        return "rational"
    if isinstance(x, QuadRat):
        return "quad"
    if isinstance(x, GaussRat):
        return "gaussian"
    if isinstance(x, (float, complex)):
        return "float"
    try:  # numpy scalars
        import numpy as np

        if isinstance(x, (np.floating, np.complexfloating)):
            return "float"
        if isinstance(x, np.integer):
            return "rational"
    except ImportError:  # pragma: no cover
        pass
    raise MixedScalarError(f"not a scalar: {x!r}")


def is_exact(x) -> bool:
    return variant(x) != "float"


def scalar_is_zero(x, tol: Tolerance = DEFAULT_TOL, scale: float = 1.0) -> bool:
    if is_exact(x):
        return x == 0
    return abs(x) <= tol.threshold(scale)


def sign(x, tol: Tolerance = DEFAULT_TOL, scale: float = 1.0) -> int:
    """Sign of a real scalar; floats inside the tolerance band count as 0."""
    v = variant(x)
    if v == "quad":
        return x.sign()
    if v == "rational":
        return (x > 0) - (x < 0)
    if v == "gaussian":
        if x.im != 0:
            raise ValidationError("sign of a non-real Gaussian rational")
        return (x.re > 0) - (x.re < 0)
    if isinstance(x, complex) or (hasattr(x, "imag") and x.imag != 0):
        raise ValidationError("sign of a complex float")
    if abs(x) <= tol.threshold(scale):
        return 0
    return 1 if x > 0 else -1


def to_float(x):
    """Float (or complex) image of any scalar."""
    if isinstance(x, GaussRat):
        return complex(x)
    if isinstance(x, complex):
        return x
    return float(x)


def conj(x):
    if isinstance(x, GaussRat):
        return x.conjugate()
    if isinstance(x, complex):
        return x.conjugate()
    return x


def abs2(x):
    """``|x|^2`` staying in the field for exact input."""
    if isinstance(x, GaussRat):
        return x.abs2()
    if isinstance(x, complex):
        return (x * x.conjugate()).real
    return x * x


def exact_sqrt(q, d: int | None = None):
    """Exact square root of a nonnegative rational, or ``None``.

    The result is a ``Fraction`` when ``q`` is a rational square and a
    ``QuadRat`` with the given ``d`` when ``q = s^2 * d``.
    """
    q = as_fraction(q)
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    # sqrt(num/den) = sqrt(num*den)/den
    prod = num * den
    sf = squarefree_part(prod)
    if d is not None and sf != d:
        return None
    s = math.isqrt(prod // sf)
    return QuadRat(0, Fraction(s, den), sf)


def rational_parts(x) -> tuple[Fraction, ...]:
    """Coordinates of an exact scalar over Q (1, or the basis {1, sqrt d} / {1, i})."""
    v = variant(x)
    if v == "rational":
        return (as_fraction(x),)
    if v == "quad":
        return (x.a, x.b)
    if v == "gaussian":
        return (x.re, x.im)
    raise MixedScalarError("rational_parts needs an exact scalar")


def _rat_json(q) -> dict:
    q = as_fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def scalar_to_json(x):
    v = variant(x)
    if v == "rational":
        return _rat_json(x)
    if v == "quad":
        return {"a": _rat_json(x.a), "b": _rat_json(x.b), "d": x.d}
    if v == "gaussian":
        return {"re": _rat_json(x.re), "im": _rat_json(x.im)}
    x = to_float(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def _rat_from_json(obj) -> Fraction:
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        num, den = obj["num"], obj["den"]
        if not isinstance(num, int) or not isinstance(den, int) or den <= 0:
            raise ValidationError(f"bad rational encoding {obj!r}")
        return Fraction(num, den)
    if isinstance(obj, int) and not isinstance(obj, bool):
        return Fraction(obj)
    raise ValidationError(f"bad rational encoding {obj!r}")


def scalar_from_json(obj):
    """Decode a scalar.  Plain ints decode as rationals, plain floats as floats."""
    if isinstance(obj, bool):
        raise ValidationError("booleans are not scalars")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        keys = set(obj)
        if keys == {"num", "den"}:
            return _rat_from_json(obj)
        if keys == {"a", "b", "d"}:
            return QuadRat(_rat_from_json(obj["a"]), _rat_from_json(obj["b"]), obj["d"])
        if keys == {"re", "im"}:
            re, im = obj["re"], obj["im"]
            if isinstance(re, float) or isinstance(im, float):
                return complex(float(re), float(im))
            return GaussRat(_rat_from_json(re), _rat_from_json(im))
    raise ValidationError(f"unrecognized scalar encoding {obj!r}")
