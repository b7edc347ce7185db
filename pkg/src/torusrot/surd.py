"""Exact arithmetic in towers of quadratic extensions of Q.

A ``Surd`` is ``a + b*sqrt(d)`` with ``a``, ``b``, ``d`` drawn from a base field
(``Fraction`` or another ``Surd``).  Only what the fold inverse needs is
supported: ring operations with base elements and with elements over the same
radicand, division, exact sign, comparison, floor.  Mixing two different
radicands at the same level raises ``TypeError``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import mpmath

_BASE = (int, Fraction)


def _sign(x) -> int:
    if isinstance(x, Surd):
        return x.sign()
    return (x > 0) - (x < 0)


def _isqrt_fraction(x: Fraction):
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt(x):
    """Exact square root of a nonnegative base element."""
    if isinstance(x, _BASE):
        x = Fraction(x)
        if x < 0:
            raise ValueError("square root of a negative number")
        r = _isqrt_fraction(x)
        if r is not None:
            return r
        return Surd(Fraction(0), Fraction(1), x)
    if _sign(x) < 0:
        raise ValueError("square root of a negative number")
    return Surd(0, 1, x)


def _same(d1, d2) -> bool:
    return d1 is d2 or (type(d1) is type(d2) and d1 == d2)


def _level(x) -> int:
    return x.level if isinstance(x, Surd) else 0


class Surd:
    __slots__ = ("a", "b", "d", "level")

    def __init__(self, a, b, d):
        self.a = a
        self.b = b
        self.d = d
        self.level = _level(d) + 1

    @staticmethod
    def make(a, b, d):
        if _sign(b) == 0:
            return a
        return Surd(a, b, d)

    def _split(self, other):
        """Return (c, e) with other = c + e*sqrt(self.d), or None if incompatible."""
        if isinstance(other, Surd) and other.level == self.level:
            if not _same(other.d, self.d):
                raise TypeError("incompatible radicands")
            return other.a, other.b
        if isinstance(other, (Surd,) + _BASE) and _level(other) < self.level:
            return other, 0
        return None

    def __add__(self, other):
        s = self._split(other)
        if s is None:
            return NotImplemented
        return Surd.make(self.a + s[0], self.b + s[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        s = self._split(other)
        if s is None:
            return NotImplemented
        return Surd.make(self.a - s[0], self.b - s[1], self.d)

    def __rsub__(self, other):
        s = self._split(other)
        if s is None:
            return NotImplemented
        return Surd.make(s[0] - self.a, s[1] - self.b, self.d)

    def __mul__(self, other):
        s = self._split(other)
        if s is None:
            return NotImplemented
        c, e = s
        return Surd.make(self.a * c + self.b * e * self.d, self.a * e + self.b * c, self.d)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Fraction(1)
        base = self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return Surd(self.a, -self.b, self.d)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        s = self._split(other)
        if s is None:
            return NotImplemented
        c, e = s
        if _sign(e) == 0:
            return Surd.make(self.a / c, self.b / c, self.d)
        den = c * c - e * e * self.d
        num = self * Surd(c, -e, self.d)
        if not isinstance(num, Surd) or num.level != self.level:
            return num / den
        return Surd.make(num.a / den, num.b / den, self.d)

    def __rtruediv__(self, other):
        s = self._split(other)
        if s is None:
            return NotImplemented
        return Surd(s[0], s[1], self.d) / self if _sign(s[1]) else (self.conjugate() * s[0]) / self.norm()

    def sign(self) -> int:
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        return sa * _sign(self.a * self.a - self.b * self.b * self.d)

    def _cmp(self, other) -> int:
        diff = self - other
        if diff is NotImplemented:
            raise TypeError(f"cannot compare Surd with {type(other).__name__}")
        return _sign(diff)

    def __eq__(self, other):
        if isinstance(other, (Surd,) + _BASE):
            try:
                return self._cmp(other) == 0
            except TypeError:
                return NotImplemented
        if isinstance(other, float):
            return float(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        if isinstance(other, float):
            other = Fraction(other)
        return self._cmp(other) < 0

    def __le__(self, other):
        if isinstance(other, float):
            other = Fraction(other)
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if isinstance(other, float):
            other = Fraction(other)
        return self._cmp(other) > 0

    def __ge__(self, other):
        if isinstance(other, float):
            other = Fraction(other)
        return self._cmp(other) >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(float(self.d))

    def to_mpf(self):
        """High-precision value under the caller's ``mpmath.mp`` context."""
        return _mp(self.a) + _mp(self.b) * mpmath.sqrt(_mp(self.d))

    def __floor__(self):
        f = math.floor(float(self))
        while self < f:
            f -= 1
        while self >= f + 1:
            f += 1
        return f

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        return f"Surd({self.a!r}, {self.b!r}, {self.d!r})"


def _mp(x):
    if isinstance(x, Surd):
        return x.to_mpf()
    if isinstance(x, Rational):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def to_mpf(x):
    return _mp(x)
