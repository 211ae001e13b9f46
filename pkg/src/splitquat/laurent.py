"""Canonical exact arithmetic in C[z11^±, z12^±, z21^±, z22^±, N(Z)^-1].

Every function this package manipulates exactly is stored as

    f = p(z11, z12, z21, z22) * N(Z)^k,

where p is a Laurent polynomial in the four matrix entries (finite map
from integer exponent 4-tuples to Gaussian rationals), N(Z) = z11*z22 -
z12*z21, and k is an integer.  The canonical form requires that N does
not divide p; since N is prime in the Laurent ring, products of
canonical numerators stay canonical and only sums need recanonicalizing.

Degrees and torus weights are tracked in doubled-integer units: the
monomial z^(a,b,c,d) * N^k has degree a+b+c+d+2k, left weight
c+d-a-b and right weight b+d-a-c (both twice the usual half-integer).
"""

from __future__ import annotations

import numpy as np

from .scalars import QQi

# exponent offsets of the two monomials of N = z11*z22 - z12*z21
_N_LEAD = (1, 0, 0, 1)
_N_TAIL = (0, 1, 1, 0)

# d/dz_ij N as (entry index -> (coefficient, exponent offset))
_DN = {
    (1, 1): (1, (0, 0, 0, 1)),   # z22
    (1, 2): (-1, (0, 0, 1, 0)),  # -z21
    (2, 1): (-1, (0, 1, 0, 0)),  # -z12
    (2, 2): (1, (1, 0, 0, 0)),   # z11
}

_ENTRY_SLOT = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}


def _divide_terms_by_n(terms):
    """Exact quotient terms/N in the Laurent ring, or None if not divisible.

    Shifts to polynomial exponents and runs single-divisor division with
    lex order z11 > z12 > z21 > z22; {N} is a Groebner basis of (N), so a
    nonzero remainder term proves indivisibility immediately.
    """
    if not terms:
        return {}
    shift = [min(e[i] for e in terms) for i in range(4)]
    work = {
        (e[0] - shift[0], e[1] - shift[1], e[2] - shift[2], e[3] - shift[3]): c
        for e, c in terms.items()
    }
    quotient = {}
    while work:
        lead = max(work)
        coeff = work.pop(lead)
        if lead[0] < 1 or lead[3] < 1:
            return None
        q = (lead[0] - 1, lead[1], lead[2], lead[3] - 1)
        quotient[q] = quotient.get(q, QQi(0)) + coeff
        tail = (q[0], q[1] + 1, q[2] + 1, q[3])
        new = work.get(tail, QQi(0)) + coeff
        if new:
            work[tail] = new
        else:
            work.pop(tail, None)
    return {
        (e[0] + shift[0], e[1] + shift[1], e[2] + shift[2], e[3] + shift[3]): c
        for e, c in quotient.items()
        if c
    }


class LaurentElement:
    """Canonical numerator-terms * N^k element (immutable by convention)."""

    __slots__ = ("terms", "npower")

    def __init__(self, terms=None, npower=0, _canonical=False):
        terms = {e: QQi.coerce(c) for e, c in (terms or {}).items() if QQi.coerce(c)}
        if not terms:
            self.terms, self.npower = {}, 0
            return
        if not _canonical:
            while True:
                reduced = _divide_terms_by_n(terms)
                if reduced is None:
                    break
                terms = reduced
                npower += 1
        self.terms = terms
        self.npower = npower

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, value):
        return cls({(0, 0, 0, 0): QQi.coerce(value)}, 0, _canonical=True)

    @classmethod
    def monomial(cls, exponents, coeff=1, npower=0):
        return cls({tuple(exponents): QQi.coerce(coeff)}, npower)

    @classmethod
    def entry(cls, i, j):
        """The coordinate function z_ij."""
        e = [0, 0, 0, 0]
        e[_ENTRY_SLOT[(i, j)]] = 1
        return cls({tuple(e): QQi(1)}, 0, _canonical=True)

    @classmethod
    def n_power(cls, k):
        """N(Z)^k as a canonical element."""
        return cls({(0, 0, 0, 0): QQi(1)}, k, _canonical=True)

    # ------------------------------------------------------------------
    # ring structure
    # ------------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _with_npower(self, k):
        """Rewrite as terms * N^k for k <= self.npower (expands N factors)."""
        if k > self.npower:
            raise ValueError("can only lower the explicit N power")
        terms = self.terms
        for _ in range(self.npower - k):
            out = {}
            for e, c in terms.items():
                lead = (e[0] + 1, e[1], e[2], e[3] + 1)
                tail = (e[0], e[1] + 1, e[2] + 1, e[3])
                out[lead] = out.get(lead, QQi(0)) + c
                out[tail] = out.get(tail, QQi(0)) - c
            terms = {e: c for e, c in out.items() if c}
        return terms

    def __add__(self, other):
        if isinstance(other, (int, QQi)) or type(other).__name__ == "Fraction":
            other = LaurentElement.constant(other)
        if not isinstance(other, LaurentElement):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        k = min(self.npower, other.npower)
        terms = dict(self._with_npower(k))
        for e, c in other._with_npower(k).items():
            new = terms.get(e, QQi(0)) + c
            if new:
                terms[e] = new
            else:
                terms.pop(e, None)
        return LaurentElement(terms, k)

    __radd__ = __add__

    def __neg__(self):
        return LaurentElement(
            {e: -c for e, c in self.terms.items()}, self.npower, _canonical=True
        )

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, QQi)) or type(other).__name__ == "Fraction":
            c = QQi.coerce(other)
            if not c:
                return LaurentElement.zero()
            return LaurentElement(
                {e: v * c for e, v in self.terms.items()}, self.npower, _canonical=True
            )
        if not isinstance(other, LaurentElement):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return LaurentElement.zero()
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                new = out.get(e, QQi(0)) + c1 * c2
                if new:
                    out[e] = new
                else:
                    out.pop(e, None)
        # N is prime in the Laurent ring, so a product of N-free numerators
        # is N-free and the result is already canonical.
        return LaurentElement(out, self.npower + other.npower, _canonical=True)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentElement):
            return NotImplemented
        return self.npower == other.npower and self.terms == other.terms

    def __hash__(self):
        return hash((self.npower, frozenset(self.terms.items())))

    def mul_n(self, k):
        """Multiply by N^k (canonical-form preserving)."""
        if self.is_zero():
            return self
        return LaurentElement(self.terms, self.npower + k, _canonical=True)

    # ------------------------------------------------------------------
    # calculus
    # ------------------------------------------------------------------

    def partial(self, i, j):
        """Formal d/dz_ij, with the chain rule applied to the N^k factor."""
        slot = _ENTRY_SLOT[(i, j)]
        out = {}

        def accumulate(e, c):
            if c:
                prev = out.get(e, QQi(0)) + c
                if prev:
                    out[e] = prev
                else:
                    out.pop(e, None)

        for e, c in self.terms.items():
            if e[slot]:
                de = list(e)
                de[slot] -= 1
                accumulate(tuple(de), c * e[slot])
        result = LaurentElement(out, self.npower)
        if self.npower:
            sign, offset = _DN[(i, j)]
            bumped = {}
            for e, c in self.terms.items():
                be = (e[0] + offset[0], e[1] + offset[1], e[2] + offset[2], e[3] + offset[3])
                bumped[be] = bumped.get(be, QQi(0)) + c * (sign * self.npower)
            result = result + LaurentElement(bumped, self.npower - 1)
        return result

    def compose_inverse(self):
        """f(Z) -> f(Z^{-1}), using (Z^{-1})_ij = ±z_.. * N^{-1}."""
        total = LaurentElement.zero()
        for e, c in self.terms.items():
            a, b, cc, d = e
            sign = -1 if (b + cc) % 2 else 1
            total = total + LaurentElement(
                {(d, b, cc, a): c * sign}, -(a + b + cc + d) - self.npower
            )
        return total

    def inv_transform(self):
        """f -> N^{-1} * f(Z^{-1}); an involution on this ring."""
        return self.compose_inverse().mul_n(-1)

    # ------------------------------------------------------------------
    # grading
    # ------------------------------------------------------------------

    def term_data(self):
        """Yield (exponents, coeff, degree, left weight, right weight)."""
        k2 = 2 * self.npower
        for e, c in self.terms.items():
            a, b, cc, d = e
            yield e, c, a + b + cc + d + k2, cc + d - a - b, b + d - a - cc

    def homogeneity_degree(self):
        """Total degree if homogeneous, else None ("mixed")."""
        degrees = {a + b + c + d for (a, b, c, d) in self.terms}
        if not degrees:
            return 0
        if len(degrees) > 1:
            return None
        return degrees.pop() + 2 * self.npower

    def degree_slice(self, degree):
        """The homogeneous part of the given total degree."""
        k2 = 2 * self.npower
        picked = {
            e: c for e, c in self.terms.items() if e[0] + e[1] + e[2] + e[3] + k2 == degree
        }
        return LaurentElement(picked, self.npower, _canonical=True)

    def weight_cells(self):
        """Split into joint (degree, left weight, right weight) eigenslices.

        Returns a dict keyed by the doubled-integer triple; the values sum
        back to self.  Each cell is torus-equivariant, so basis expansion
        can be solved cell by cell.
        """
        cells = {}
        for e, c, deg, wn, wm in self.term_data():
            cells.setdefault((deg, wn, wm), {})[e] = c
        return {
            key: LaurentElement(terms, self.npower, _canonical=True)
            for key, terms in cells.items()
        }

    # ------------------------------------------------------------------
    # numeric evaluation
    # ------------------------------------------------------------------

    def evaluate(self, point):
        """Evaluate at a point (PointHC, 2x2 array, or 4 entries).

        Requires a nonsingular point when the element carries a negative
        N power.  Entries may be numpy arrays for grid evaluation.
        """
        z11, z12, z21, z22 = _coerce_point(point)
        n = z11 * z22 - z12 * z21
        if self.npower < 0:
            singular = np.any(np.abs(n) == 0) if isinstance(n, np.ndarray) else abs(n) == 0
            if singular:
                raise ZeroDivisionError("evaluation at a singular point with negative N power")
        total = 0
        for (a, b, c, d), coeff in self.terms.items():
            term = complex(coeff)
            for base, e in ((z11, a), (z12, b), (z21, c), (z22, d)):
                if e:
                    term = term * base ** e
            total = total + term
        if self.npower:
            total = total * n ** self.npower
        return total

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------

    def to_json_dict(self):
        """Serialize with terms sorted lexicographically by exponent tuple."""
        rows = []
        for e in sorted(self.terms):
            re_s, im_s = self.terms[e].to_json_pair()
            rows.append({"e": list(e), "re": re_s, "im": im_s})
        return {"k": self.npower, "terms": rows}

    @classmethod
    def from_json_dict(cls, data):
        if not isinstance(data, dict):
            raise ValueError("serialized element must be a JSON object")
        unknown = set(data) - {"k", "terms"}
        if unknown:
            raise ValueError(f"unknown fields in serialized element: {sorted(unknown)}")
        if "k" not in data or "terms" not in data:
            raise ValueError("serialized element needs 'k' and 'terms'")
        k = data["k"]
        if not isinstance(k, int):
            raise ValueError("'k' must be an integer")
        terms = {}
        for row in data["terms"]:
            bad = set(row) - {"e", "re", "im"}
            if bad:
                raise ValueError(f"unknown fields in term: {sorted(bad)}")
            e = row["e"]
            if len(e) != 4 or not all(isinstance(x, int) for x in e):
                raise ValueError("'e' must be four integers")
            coeff = QQi.from_json_pair(row["re"], row["im"])
            key = tuple(e)
            if key in terms:
                raise ValueError(f"duplicate exponent tuple {key}")
            terms[key] = coeff
        return cls(terms, k)

    def __repr__(self):
        if self.is_zero():
            return "0"
        names = ("z11", "z12", "z21", "z22")
        parts = []
        for e in sorted(self.terms, reverse=True):
            factors = [f"{names[i]}^{e[i]}" for i in range(4) if e[i]]
            body = "*".join(factors) if factors else "1"
            parts.append(f"({self.terms[e]})*{body}")
        s = " + ".join(parts)
        return f"[{s}]*N^{self.npower}" if self.npower else f"[{s}]"


def _coerce_point(point):
    """Accept PointHC-likes, 2x2 arrays/sequences, or 4-tuples of values."""
    if hasattr(point, "z11"):
        return point.z11, point.z12, point.z21, point.z22
    arr = np.asarray(point)
    if arr.shape[:2] == (2, 2):
        return arr[0, 0], arr[0, 1], arr[1, 0], arr[1, 1]
    if arr.shape == (4,):
        return arr[0], arr[1], arr[2], arr[3]
    if isinstance(point, (tuple, list)) and len(point) == 4:
        return point[0], point[1], point[2], point[3]
    raise TypeError("cannot interpret evaluation point")


ZERO = LaurentElement.zero()
ONE = LaurentElement.constant(1)
N = LaurentElement.n_power(1)
Z11 = LaurentElement.entry(1, 1)
Z12 = LaurentElement.entry(1, 2)
Z21 = LaurentElement.entry(2, 1)
Z22 = LaurentElement.entry(2, 2)


def box(f: LaurentElement) -> LaurentElement:
    """Determinant Laplacian: d11 d22 f - d12 d21 f."""
    return f.partial(1, 1).partial(2, 2) - f.partial(1, 2).partial(2, 1)


def homogeneity_degree(f: LaurentElement):
    return f.homogeneity_degree()


def evaluate(f: LaurentElement, point):
    return f.evaluate(point)


def inv_transform(f: LaurentElement) -> LaurentElement:
    return f.inv_transform()
