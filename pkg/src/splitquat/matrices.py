"""2x2 matrix algebra over the complexified quaternions.

A complexified quaternion is just a 2x2 complex matrix; Matrix2 is a
thin generic container whose entries may be exact scalars (QQi), exact
functions (LaurentElement), or plain complex numbers.  N(Z) is the
determinant, Z^+ the adjugate, so Z * Z^+ = N(Z) * I.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .laurent import LaurentElement
from .scalars import QQi


class Matrix2:
    """A 2x2 matrix with ring-element entries (exact or numeric)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls, one=1):
        zero = one - one
        return cls(one, zero, zero, one)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other):
        if not isinstance(other, Matrix2):
            return NotImplemented
        return self.entries() == other.entries()

    def __add__(self, other):
        return Matrix2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other):
        return Matrix2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self):
        return Matrix2(-self.a, -self.b, -self.c, -self.d)

    def __matmul__(self, other):
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def scale(self, s):
        return Matrix2(self.a * s, self.b * s, self.c * s, self.d * s)

    def trace(self):
        return self.a + self.d

    def norm(self):
        """N(Z): the determinant."""
        return self.a * self.d - self.b * self.c

    def adjugate(self):
        """Z^+, the quaternionic conjugate: Z * Z^+ = N(Z) * I."""
        return Matrix2(self.d, -self.b, -self.c, self.a)

    def to_array(self):
        return np.array(
            [[complex(self.a), complex(self.b)], [complex(self.c), complex(self.d)]]
        )

    def __repr__(self):
        return f"Matrix2([[{self.a!r}, {self.b!r}], [{self.c!r}, {self.d!r}]])"


def norm(z: Matrix2):
    return z.norm()


def conjugate_plus(z: Matrix2) -> Matrix2:
    return z.adjugate()


def invert(z: Matrix2) -> Matrix2:
    """Z^{-1} = Z^+ / N(Z); raises on singular input."""
    n = z.norm()
    if isinstance(n, QQi):
        if not n:
            raise ZeroDivisionError("singular matrix has no inverse")
        return z.adjugate().scale(QQi(1) / n)
    if n == 0:
        raise ZeroDivisionError("singular matrix has no inverse")
    return z.adjugate().scale(1 / n)


def exact_matrix(rows) -> Matrix2:
    """Build a Matrix2 with QQi entries from ints/Fractions/QQi/pairs."""

    def to_qqi(x):
        if isinstance(x, QQi):
            return x
        if isinstance(x, tuple):
            return QQi(*x)
        return QQi.coerce(x)

    (a, b), (c, d) = rows
    return Matrix2(to_qqi(a), to_qqi(b), to_qqi(c), to_qqi(d))


# Z as a matrix of coordinate functions, and the matrix differential
# operators; indices follow the transposed layout del = (d11 d21; d12 d22)
# so that the adjugate-patterned counterpart satisfies del del^+ = box * I.
Z_MATRIX = Matrix2(
    LaurentElement.entry(1, 1),
    LaurentElement.entry(1, 2),
    LaurentElement.entry(2, 1),
    LaurentElement.entry(2, 2),
)


def matrix_del(f: LaurentElement) -> Matrix2:
    """del f = [[d11 f, d21 f], [d12 f, d22 f]]."""
    return Matrix2(f.partial(1, 1), f.partial(2, 1), f.partial(1, 2), f.partial(2, 2))


def matrix_del_plus(f: LaurentElement) -> Matrix2:
    """del^+ f = [[d22 f, -d21 f], [-d12 f, d11 f]] (adjugate pattern)."""
    return Matrix2(f.partial(2, 2), -f.partial(2, 1), -f.partial(1, 2), f.partial(1, 1))


class PointHC(NamedTuple):
    """A numeric evaluation point: four complex matrix entries."""

    z11: complex
    z12: complex
    z21: complex
    z22: complex

    @classmethod
    def from_matrix(cls, m):
        if isinstance(m, Matrix2):
            m = m.to_array()
        arr = np.asarray(m, dtype=complex)
        return cls(arr[0, 0], arr[0, 1], arr[1, 0], arr[1, 1])

    def to_array(self):
        return np.array([[self.z11, self.z12], [self.z21, self.z22]])

    def norm(self):
        return self.z11 * self.z22 - self.z12 * self.z21
