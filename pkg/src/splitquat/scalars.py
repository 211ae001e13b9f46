"""Exact scalar arithmetic: Gaussian rationals and generalized binomials.

All exact computation in this package runs over Q(i), represented as a
pair of arbitrary-precision ``fractions.Fraction`` values.  Floats never
enter an exact code path; conversion to ``complex`` is explicit.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial


def gen_binom(u, j):
    """Generalized binomial coefficient binom(u, j) for integer u (any sign).

    binom(u, j) = u(u-1)...(u-j+1)/j! ; zero for j < 0.  Always an integer
    for integer u.
    """
    if j < 0:
        return 0
    num = 1
    for i in range(j):
        num *= u - i
    return num // factorial(j) if j else 1


class QQi:
    """A Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def coerce(cls, value):
        """Coerce int/Fraction/QQi into a QQi (floats are rejected)."""
        if isinstance(value, QQi):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to QQi")

    @classmethod
    def _try_coerce(cls, value):
        if isinstance(value, QQi):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        return None

    def __add__(self, other):
        other = QQi._try_coerce(other)
        if other is None:
            return NotImplemented
        return QQi(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        other = QQi._try_coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return QQi.coerce(other) + (-self)

    def __mul__(self, other):
        other = QQi._try_coerce(other)
        if other is None:
            return NotImplemented
        return QQi(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QQi.coerce(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other):
        return QQi.coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QQi(other)
        if not isinstance(other, QQi):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return QQi(self.re, -self.im)

    def __complex__(self):
        return complex(self.re) + 1j * complex(self.im)

    def is_rational(self):
        return self.im == 0

    def __repr__(self):
        if not self.im:
            return f"{self.re}"
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    @staticmethod
    def _fraction_str(q: Fraction) -> str:
        return f"{q.numerator}/{q.denominator}"

    def to_json_pair(self):
        """Serialize as the ("num/den", "num/den") string pair used on disk."""
        return self._fraction_str(self.re), self._fraction_str(self.im)

    @classmethod
    def from_json_pair(cls, re_str, im_str):
        return cls(Fraction(re_str), Fraction(im_str))


ZERO = QQi(0)
ONE = QQi(1)
I = QQi(0, 1)
