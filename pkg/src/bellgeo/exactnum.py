"""Exact arithmetic over quadratic extensions of the rationals.

Certificate replay needs numbers of the form p + q*sqrt(d) with p, q rational
and d a fixed square-free integer (d = 2 and d = 5 cover every radical that
appears in the catalog).  Fractions alone are not enough: the Hardy-point data
lives in Q(sqrt 5).  ``Quad`` implements field arithmetic with exact sign
decisions so the simplex solver can pivot on these numbers without rounding.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

_SQRT_DIGITS = 60


def _sqrt_approx(d: int) -> Fraction:
    # floor(sqrt(d * 10^(2k))) / 10^k, good to _SQRT_DIGITS digits
    scale = 10 ** _SQRT_DIGITS
    return Fraction(isqrt(d * scale * scale), scale)


_SQRT_CACHE: dict[int, Fraction] = {}


class Quad:
    """p + q*sqrt(d) with exact Fraction coefficients."""

    __slots__ = ("p", "q", "d")

    def __init__(self, p=0, q=0, d=5):
        self.p = Fraction(p)
        self.q = Fraction(q)
        self.d = int(d)

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Quad):
            if other.q == 0:
                return Quad(other.p, 0, self.d)
            if self.q == 0:
                return Quad(other.p, other.q, other.d), True
            if other.d != self.d:
                raise ValueError("mixed radicals %d and %d" % (self.d, other.d))
            return other
        if isinstance(other, (int, Fraction)):
            return Quad(other, 0, self.d)
        return NotImplemented

    # -- ring ops ----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if isinstance(o, tuple):  # self is rational, adopt other's radical
            o = o[0]
            return Quad(self.p + o.p, o.q, o.d)
        return Quad(self.p + o.p, self.q + o.q, self.d)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.p, -self.q, self.d)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Quad) else Quad(-Fraction(other), 0, self.d))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if isinstance(o, tuple):
            o = o[0]
            return Quad(self.p * o.p, self.p * o.q, o.d)
        return Quad(self.p * o.p + self.q * o.q * self.d,
                    self.p * o.q + self.q * o.p, self.d)

    __rmul__ = __mul__

    def inverse(self):
        den = self.p * self.p - self.q * self.q * self.d
        if den == 0:
            if self.p == 0 and self.q == 0:
                raise ZeroDivisionError("0 has no inverse")
            raise ZeroDivisionError("norm 0 element (d is a square?)")
        return Quad(self.p / den, -self.q / den, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if isinstance(o, tuple):
            o = o[0]
        return self * o.inverse()

    def __rtruediv__(self, other):
        return Quad(other, 0, self.d) / self

    # -- order -------------------------------------------------------------

    def sign(self) -> int:
        p, q = self.p, self.q
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return 1 if q > 0 else -1
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        # opposite signs: compare p^2 against q^2 d
        lhs, rhs = p * p, q * q * self.d
        if p > 0:  # q < 0
            return (lhs > rhs) - (lhs < rhs)
        return (rhs > lhs) - (rhs < lhs)

    def _cmp(self, other) -> int:
        diff = self - (other if isinstance(other, Quad) else Quad(other, 0, self.d))
        return diff.sign()

    def __eq__(self, other):
        if isinstance(other, (Quad, int, Fraction)):
            return self._cmp(other) == 0
        return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.d))

    def __bool__(self):
        return self.p != 0 or self.q != 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- conversion ---------------------------------------------------------

    def __float__(self):
        if self.q == 0:
            return float(self.p)
        if self.d not in _SQRT_CACHE:
            _SQRT_CACHE[self.d] = _sqrt_approx(self.d)
        return float(self.p + self.q * _SQRT_CACHE[self.d])

    def __repr__(self):
        if self.q == 0:
            return "Quad(%s)" % self.p
        return "Quad(%s + %s*sqrt(%d))" % (self.p, self.q, self.d)


def sqrt2() -> Quad:
    return Quad(0, 1, 2)


def sqrt5() -> Quad:
    return Quad(0, 1, 5)


def exact_sign(x) -> int:
    """Sign of a Fraction, int or Quad without float rounding."""
    if isinstance(x, Quad):
        return x.sign()
    return (x > 0) - (x < 0)
