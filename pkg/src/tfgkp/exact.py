"""Exact arithmetic in ``Q(i, sqrt 2)``.

Elements are ``a + b sqrt(2)`` with Gaussian rationals ``a`` and ``b``.  This
covers every amplitude produced by 50:50 beam splitters, interleavers,
eighth-root-of-unity phases and X-basis (d = 2) projections.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class QI2:
    """``(ar + i ai) + (br + i bi) sqrt(2)`` with rational parts."""

    __slots__ = ("ar", "ai", "br", "bi")

    def __init__(self, ar=0, ai=0, br=0, bi=0):
        self.ar, self.ai = _frac(ar), _frac(ai)
        self.br, self.bi = _frac(br), _frac(bi)

    # conversions -------------------------------------------------------------
    @classmethod
    def coerce(cls, x) -> "QI2":
        if isinstance(x, QI2):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, complex) or isinstance(x, float):
            raise TypeError("floats cannot enter exact arithmetic")
        return cls(_frac(x))

    @classmethod
    def from_parts(cls, parts) -> "QI2":
        """From ``[ar, ai, br, bi]`` (numbers or rational strings)."""
        return cls(*parts)

    def parts(self):
        return [str(self.ar), str(self.ai), str(self.br), str(self.bi)]

    def __complex__(self) -> complex:
        r2 = math.sqrt(2.0)
        return complex(float(self.ar) + r2 * float(self.br), float(self.ai) + r2 * float(self.bi))

    def __float__(self) -> float:
        if not self.is_real:
            raise ValueError(f"{self} is not real")
        return float(self.ar) + math.sqrt(2.0) * float(self.br)

    @property
    def is_real(self) -> bool:
        return self.ai == 0 and self.bi == 0

    @property
    def is_rational(self) -> bool:
        return self.br == 0 and self.bi == 0

    def to_fraction(self) -> Fraction:
        if not (self.is_real and self.is_rational):
            raise ValueError(f"{self} is not a rational number")
        return self.ar

    def is_zero(self) -> bool:
        return self.ar == 0 and self.ai == 0 and self.br == 0 and self.bi == 0

    # arithmetic --------------------------------------------------------------
    def __add__(self, o):
        try:
            o = QI2.coerce(o)
        except TypeError:
            return NotImplemented
        return QI2(self.ar + o.ar, self.ai + o.ai, self.br + o.br, self.bi + o.bi)

    __radd__ = __add__

    def __neg__(self):
        return QI2(-self.ar, -self.ai, -self.br, -self.bi)

    def __sub__(self, o):
        try:
            return self + (-QI2.coerce(o))
        except TypeError:
            return NotImplemented

    def __rsub__(self, o):
        return QI2.coerce(o) - self

    def __mul__(self, o):
        try:
            o = QI2.coerce(o)
        except TypeError:
            return NotImplemented
        # (a + b s)(c + e s) = (ac + 2be) + (ae + bc) s, with complex a, b, c, e
        a = (self.ar, self.ai)
        b = (self.br, self.bi)
        c = (o.ar, o.ai)
        e = (o.br, o.bi)

        def cm(x, y):
            return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])

        ac, be, ae, bc = cm(a, c), cm(b, e), cm(a, e), cm(b, c)
        return QI2(ac[0] + 2 * be[0], ac[1] + 2 * be[1], ae[0] + bc[0], ae[1] + bc[1])

    __rmul__ = __mul__

    def conjugate(self) -> "QI2":
        return QI2(self.ar, -self.ai, self.br, -self.bi)

    def galois(self) -> "QI2":
        """``sqrt 2 -> -sqrt 2``."""
        return QI2(self.ar, self.ai, -self.br, -self.bi)

    def abs2(self) -> "QI2":
        return self * self.conjugate()

    def inverse(self) -> "QI2":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # multiply by the Galois and complex conjugates to reach a rational
        g = self.galois()
        m = self * g  # lies in Q(i)
        mc = m.conjugate()
        n = (m * mc).to_fraction()
        return g * mc * QI2(1 / n)

    def __truediv__(self, o):
        try:
            o = QI2.coerce(o)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        return QI2.coerce(o) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = QI2(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, o):
        try:
            o = QI2.coerce(o)
        except TypeError:
            return NotImplemented
        return (self.ar, self.ai, self.br, self.bi) == (o.ar, o.ai, o.br, o.bi)

    def __hash__(self):
        return hash((self.ar, self.ai, self.br, self.bi))

    def sign(self) -> int:
        """Sign of a real element, decided exactly."""
        if not self.is_real:
            raise ValueError("sign of a non-real number")
        a, b = self.ar, self.br
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: compare a^2 with 2 b^2
        big = a * a - 2 * b * b
        return (1 if a > 0 else -1) if big > 0 else (1 if b > 0 else -1)

    def __repr__(self):
        return f"QI2({self})"

    def __str__(self):
        def cplx(re, im):
            if im == 0:
                return f"{re}"
            if re == 0:
                return f"{im}i"
            return f"({re}{'+' if im > 0 else '-'}{abs(im)}i)"

        head = cplx(self.ar, self.ai)
        if self.br == 0 and self.bi == 0:
            return head
        tail = cplx(self.br, self.bi) + "*sqrt2"
        return tail if head == "0" else f"{head} + {tail}"


ZERO = QI2(0)
ONE = QI2(1)
I = QI2(0, 1)
SQRT2 = QI2(0, 0, 1)
INV_SQRT2 = QI2(0, 0, Fraction(1, 2))


def eighth_root(k: int) -> QI2:
    """``exp(i pi k / 4)``."""
    k %= 8
    h = Fraction(1, 2)
    table = {
        0: QI2(1), 1: QI2(0, 0, h, h), 2: QI2(0, 1), 3: QI2(0, 0, -h, h),
        4: QI2(-1), 5: QI2(0, 0, -h, -h), 6: QI2(0, -1), 7: QI2(0, 0, h, -h),
    }
    return table[k]
