"""Matrix coefficients of SU(1,1) discrete series (and the SU(2) family).

The coefficient tau^l_{n,m}(Z) is the s-contour residue of

    (s z11 + z21)^(l-m) * (s z12 + z22)^(l+m) * s^(n-l-1),

with the expansion region fixed by the series: the holomorphic family
(m, n >= -l) expands the first factor in z21/(s z11), the antiholomorphic
family (m, n <= l) expands the second in s z12/z22, and the SU(2) family
(l >= 0) needs no choice.  Each residue is a finite binomial sum and is
produced here as an exact LaurentElement: harmonic, homogeneous of
degree 2l, with torus weights (n, m).

All indices are stored doubled (twol = 2l etc.) so that half-integer
parameters stay integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .laurent import LaurentElement
from .scalars import QQi, gen_binom


class Series(str, Enum):
    HOL = "hol"
    ANTIHOL = "antihol"
    SU2 = "su2"


class ComponentLabel(str, Enum):
    DH_LESS = "dh_less"
    DMM = "dmm"
    DH_GREATER = "dh_greater"
    DA_LESS = "da_less"
    DPP = "dpp"
    DA_GREATER = "da_greater"

    @property
    def series(self) -> Series:
        if self in (ComponentLabel.DH_LESS, ComponentLabel.DMM, ComponentLabel.DH_GREATER):
            return Series.HOL
        return Series.ANTIHOL


HOL_LABELS = (ComponentLabel.DH_LESS, ComponentLabel.DMM, ComponentLabel.DH_GREATER)
ANTIHOL_LABELS = (ComponentLabel.DA_LESS, ComponentLabel.DPP, ComponentLabel.DA_GREATER)


class InvalidIndexError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CoeffIndex:
    """Identifies tau^l_{n,m} * N^k within one of the three families."""

    series: Series
    twol: int
    twon: int
    twom: int
    k: int = 0

    def validate(self):
        s, twol, twon, twom = self.series, self.twol, self.twon, self.twom
        if (twon - twol) % 2 or (twom - twol) % 2:
            raise InvalidIndexError(f"m, n must lie in Z + l: {self}")
        if s == Series.SU2:
            if twol < 0 or not (-twol <= twon <= twol) or not (-twol <= twom <= twol):
                raise InvalidIndexError(f"invalid SU(2) index: {self}")
        elif s == Series.HOL:
            if twol > -2 or twon < -twol or twom < -twol:
                raise InvalidIndexError(f"invalid holomorphic index: {self}")
        elif s == Series.ANTIHOL:
            if twol > -2 or twon > twol or twom > twol:
                raise InvalidIndexError(f"invalid antiholomorphic index: {self}")
        else:
            raise InvalidIndexError(f"unknown series: {s}")
        return self

    def with_k(self, k):
        return CoeffIndex(self.series, self.twol, self.twon, self.twom, k)


def _tau_hol_terms(twol, twon, twom):
    """Holomorphic residue: sum over p of
    binom(l+m, p) binom(l-m, p-m+n) z11^(l-n-p) z21^(p-m+n) z12^p z22^(l+m-p).
    """
    terms = {}
    lpm = (twol + twom) // 2
    lmm = (twol - twom) // 2
    ln = (twol - twon) // 2
    nm = (twon - twom) // 2
    for p in range(0, lpm + 1):
        c = gen_binom(lpm, p) * gen_binom(lmm, p + nm)
        if c:
            terms[(ln - p, p, p + nm, lpm - p)] = QQi(c)
    return terms


def _tau_antihol_terms(twol, twon, twom):
    """Antiholomorphic / SU(2) residue: sum over p of
    binom(l-m, p) binom(l+m, l-n-p) z11^p z21^(l-m-p) z12^(l-n-p) z22^(m+n+p).
    """
    terms = {}
    lpm = (twol + twom) // 2
    lmm = (twol - twom) // 2
    ln = (twol - twon) // 2
    mn = (twom + twon) // 2
    for p in range(0, max(lmm, ln) + 1):
        c = gen_binom(lmm, p) * gen_binom(lpm, ln - p)
        if c and lmm - p >= 0 and ln - p >= 0:
            terms[(p, ln - p, lmm - p, mn + p)] = QQi(c)
    return terms


def tau(index_or_series, twol=None, twon=None, twom=None) -> LaurentElement:
    """The exact matrix coefficient for a (series, l, n, m) index."""
    if isinstance(index_or_series, CoeffIndex):
        idx = index_or_series
    else:
        idx = CoeffIndex(Series(index_or_series), twol, twon, twom)
    idx.validate()
    if idx.series == Series.HOL:
        terms = _tau_hol_terms(idx.twol, idx.twon, idx.twom)
    else:
        terms = _tau_antihol_terms(idx.twol, idx.twon, idx.twom)
    return LaurentElement(terms, 0, _canonical=True)


def t_su2(twol, twon, twom) -> LaurentElement:
    """SU(2) matrix coefficient (polynomial); shares the residue extractor."""
    return tau(Series.SU2, twol, twon, twom)


def basis_element(index: CoeffIndex) -> LaurentElement:
    """tau^l_{n,m} * N^k in canonical form."""
    return tau(index).mul_n(index.k)


def classify_component(index: CoeffIndex) -> ComponentLabel:
    """Assign the unique irreducible component containing the index.

    Per fixed l the three k ranges k <= -1, 0 <= k <= -(2l+2) and
    k >= -(2l+1) partition the integers.
    """
    index.validate()
    if index.series == Series.SU2:
        raise InvalidIndexError("SU(2) indices have no component label")
    hol = index.series == Series.HOL
    if index.k <= -1:
        return ComponentLabel.DH_LESS if hol else ComponentLabel.DA_LESS
    if index.k <= -index.twol - 2:
        return ComponentLabel.DMM if hol else ComponentLabel.DPP
    return ComponentLabel.DH_GREATER if hol else ComponentLabel.DA_GREATER


def component_k_range(label: ComponentLabel, twol, max_absk):
    """The k values of the component at this twol, clipped to |k| <= max_absk."""
    if label in (ComponentLabel.DH_LESS, ComponentLabel.DA_LESS):
        lo, hi = -max_absk, -1
    elif label in (ComponentLabel.DMM, ComponentLabel.DPP):
        lo, hi = 0, min(-twol - 2, max_absk)
    else:
        lo, hi = max(-twol - 1, -max_absk), max_absk
    return range(lo, hi + 1)


def enumerate_basis(label: ComponentLabel, min_twol, max_absk, mn_offset):
    """All component indices in the window, in deterministic order.

    Order: twol descending, k ascending, then twon, twom ascending.
    Offsets count steps from the band edge (-l for holomorphic, l for
    antiholomorphic).
    """
    out = []
    hol = label.series == Series.HOL
    for twol in range(-2, min_twol - 1, -1):
        edge = -twol if hol else twol
        step = 2 if hol else -2
        mn_values = sorted(edge + step * j for j in range(mn_offset + 1))
        for k in component_k_range(label, twol, max_absk):
            for twon in mn_values:
                for twom in mn_values:
                    out.append(CoeffIndex(label.series, twol, twon, twom, k).validate())
    return out


class ProportionalityError(ArithmeticError):
    """Two elements expected to be proportional are not."""


def exact_ratio(f: LaurentElement, g: LaurentElement) -> QQi:
    """The constant c with f = c*g, or ProportionalityError."""
    if g.is_zero():
        raise ProportionalityError("ratio against the zero element")
    if f.is_zero():
        return QQi(0)
    if f.npower != g.npower or set(f.terms) != set(g.terms):
        raise ProportionalityError("supports differ; elements not proportional")
    items = iter(g.terms.items())
    e0, c0 = next(items)
    ratio = f.terms[e0] / c0
    for e, c in g.terms.items():
        if f.terms[e] != ratio * c:
            raise ProportionalityError("coefficient ratios are not constant")
    return ratio


def dual_element(index: CoeffIndex) -> LaurentElement:
    """tau^l_{m,n}(Z^{-1}) * N(Z)^(-k-2), the pairing dual of the index."""
    index.validate()
    swapped = tau(index.series, index.twol, index.twom, index.twon)
    return swapped.compose_inverse().mul_n(-index.k - 2)


def dual_partner_index(index: CoeffIndex) -> CoeffIndex:
    """The regular basis index proportional to dual_element(index)."""
    series = Series.ANTIHOL if index.series == Series.HOL else Series.HOL
    return CoeffIndex(
        series, index.twol, -index.twon, -index.twom, -index.twol - index.k - 2
    ).validate()


def conj_inverse_constant(twol, twom, twon, series=None) -> QQi:
    """The exact constant c in tau^l_{m,n}(Z^{-1}) = c * tau^l_{-n,-m}(Z) * N^(-2l).

    Computed by exact division; raises ProportionalityError if the claim
    fails (no closed formula is assumed).
    """
    if series is None:
        series = Series.HOL if twom >= -twol and twon >= -twol else Series.ANTIHOL
    lhs = tau(series, twol, twom, twon).compose_inverse()
    flipped = Series.ANTIHOL if series == Series.HOL else Series.HOL
    rhs = tau(flipped, twol, -twon, -twom).mul_n(-twol)
    return exact_ratio(lhs, rhs)


def tau_at_diagonal(twol, twon, twom, lam1, lam2):
    """tau^l_{n,m}(diag(lam1, lam2)) = delta_{mn} lam1^(l-n) lam2^(l+n)."""
    if twom != twon:
        return 0 * lam1
    e1 = (twol - twon) // 2
    e2 = (twol + twon) // 2
    return lam1 ** e1 * lam2 ** e2


def tau_value(series, twol, twon, twom, z11, z12, z21, z22):
    """Numeric tau evaluation straight from the binomial sum.

    Entries may be scalars or numpy arrays (broadcast over grids); used by
    the kernel series where building exact elements would be wasteful.
    """
    series = Series(series)
    total = 0.0 + 0.0j
    if series == Series.HOL:
        lpm = (twol + twom) // 2
        ln = (twol - twon) // 2
        nm = (twon - twom) // 2
        for p in range(0, lpm + 1):
            c = gen_binom(lpm, p) * gen_binom((twol - twom) // 2, p + nm)
            if c:
                total = total + float(c) * z11 ** (ln - p) * z12 ** p * z21 ** (p + nm) * z22 ** (lpm - p)
    else:
        lmm = (twol - twom) // 2
        ln = (twol - twon) // 2
        mn = (twom + twon) // 2
        for p in range(0, max(lmm, ln) + 1):
            if lmm - p < 0 or ln - p < 0:
                continue
            c = gen_binom(lmm, p) * gen_binom((twol + twom) // 2, ln - p)
            if c:
                total = total + float(c) * z11 ** p * z12 ** (ln - p) * z21 ** (lmm - p) * z22 ** (mn + p)
    return total


def tau_matrix(series, twol, twon_list, twom_list, z):
    """Matrix [tau^l_{n,m}(z)] over index lists, vectorized per term."""
    z = np.asarray(z, dtype=complex)
    out = np.empty((len(twon_list), len(twom_list)), dtype=complex)
    for i, twon in enumerate(twon_list):
        for j, twom in enumerate(twom_list):
            out[i, j] = tau_value(
                series, twol, twon, twom, z[0, 0], z[0, 1], z[1, 0], z[1, 1]
            )
    return out
