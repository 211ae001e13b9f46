"""The twisted conformal action of gl(2, H_C) on the coefficient spaces.

The infinitesimal action splits over the four 2x2 blocks of a generator
(A B; C D):

    A:  f -> Tr(A . (-Z del f - f))
    B:  f -> Tr(B . (-del f))
    C:  f -> Tr(C . (Z (del f) Z + 2 Z f))
    D:  f -> Tr(D . ((del f) Z + f))

with del the transposed matrix of partials.  Everything here is exact;
the group-level action is evaluated numerically at points only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coefficients import (
    CoeffIndex,
    ComponentLabel,
    InvalidIndexError,
    Series,
    basis_element,
    classify_component,
)
from .laurent import LaurentElement
from .matrices import Matrix2, Z_MATRIX, exact_matrix, matrix_del
from .scalars import QQi

# quaternionic units as 2x2 matrices: 1, e1~, e2~, e3
UNIT_MATRICES = {
    "1": ((1, 0), (0, 1)),
    "e1t": ((0, 1), (1, 0)),
    "e2t": ((0, (0, 1)), ((0, -1), 0)),
    "e3": (((0, -1), 0), (0, (0, 1))),
}


@dataclass(frozen=True)
class LieAlgElement:
    """A gl(2, H_C) element in block form; blocks are exact 2x2 matrices."""

    A: Matrix2
    B: Matrix2
    C: Matrix2
    D: Matrix2
    name: str = ""

    @classmethod
    def zero(cls):
        z = exact_matrix(((0, 0), (0, 0)))
        return cls(z, z, z, z)

    @classmethod
    def single_block(cls, block: str, mat, name=""):
        z = exact_matrix(((0, 0), (0, 0)))
        mat = mat if isinstance(mat, Matrix2) else exact_matrix(mat)
        blocks = {"A": z, "B": z, "C": z, "D": z}
        blocks[block] = mat
        return cls(blocks["A"], blocks["B"], blocks["C"], blocks["D"], name or block)

    def commutator(self, other: "LieAlgElement") -> "LieAlgElement":
        a1, b1, c1, d1 = self.A, self.B, self.C, self.D
        a2, b2, c2, d2 = other.A, other.B, other.C, other.D
        return LieAlgElement(
            (a1 @ a2 + b1 @ c2) - (a2 @ a1 + b2 @ c1),
            (a1 @ b2 + b1 @ d2) - (a2 @ b1 + b2 @ d1),
            (c1 @ a2 + d1 @ c2) - (c2 @ a1 + d2 @ c1),
            (c1 @ b2 + d1 @ d2) - (c2 @ b1 + d2 @ d1),
            name=f"[{self.name},{other.name}]",
        )

    def to_array(self):
        out = np.zeros((4, 4), dtype=complex)
        out[:2, :2] = self.A.to_array()
        out[:2, 2:] = self.B.to_array()
        out[2:, :2] = self.C.to_array()
        out[2:, 2:] = self.D.to_array()
        return out


def elementary_generators():
    """The 16 block-by-unit generators spanning gl(2, H_C) over C."""
    gens = []
    for block in ("A", "B", "C", "D"):
        for unit, rows in UNIT_MATRICES.items():
            gens.append(LieAlgElement.single_block(block, rows, name=f"{block}:{unit}"))
    return gens


def _trace_against(block: Matrix2, mat: Matrix2):
    """Tr(block . mat) for a scalar 2x2 against a matrix of functions."""
    return block.a * mat.a + block.b * mat.c + block.c * mat.b + block.d * mat.d


def rho1_algebra(x: LieAlgElement, f: LaurentElement) -> LaurentElement:
    """Apply the Lie algebra action of x to f (exact)."""
    df = matrix_del(f)
    z = Z_MATRIX
    zdf = z @ df
    total = -_trace_against(x.A, zdf) - x.A.trace() * f
    total = total - _trace_against(x.B, df)
    total = total + _trace_against(x.C, zdf @ z) + _trace_against(x.C, z) * f * 2
    total = total + _trace_against(x.D, df @ z) + x.D.trace() * f
    return total


# ----------------------------------------------------------------------
# exact expansion in the coefficient basis
# ----------------------------------------------------------------------


class NotInSpanError(ValueError):
    """The element does not lie in the span of the coefficient family."""

    def __init__(self, message, residual_cells=None):
        super().__init__(message)
        self.residual_cells = residual_cells or []


_BASIS_CACHE: dict = {}


def _cached_basis(idx: CoeffIndex) -> LaurentElement:
    el = _BASIS_CACHE.get(idx)
    if el is None:
        el = basis_element(idx)
        _BASIS_CACHE[idx] = el
    return el


def span_candidates(cell_key):
    """Valid indices matching one (degree, weight, weight) cell.

    For fixed weights the band conditions bound twol from below, so the
    candidate list is finite: holomorphic needs twon, twom >= -twol, the
    antiholomorphic mirror needs them <= twol.
    """
    deg, wn, wm = cell_key
    out = []
    if wn % 2 == wm % 2:
        if wn >= 2 and wm >= 2:
            for twol in range(max(-wn, -wm), -1):
                if (deg - twol) % 2 == 0:
                    out.append(CoeffIndex(Series.HOL, twol, wn, wm, (deg - twol) // 2))
        if wn <= -2 and wm <= -2:
            for twol in range(max(wn, wm), -1):
                if (deg - twol) % 2 == 0:
                    out.append(CoeffIndex(Series.ANTIHOL, twol, wn, wm, (deg - twol) // 2))
    return out


def _solve_cell(cell: LaurentElement, candidates):
    """Exact least-structure solve of cell = sum c_i basis_i; None if outside."""
    if not candidates:
        return None
    basis_els = [_cached_basis(ix) for ix in candidates]
    kmin = min([cell.npower] + [b.npower for b in basis_els])
    target = cell._with_npower(kmin)
    cols = [b._with_npower(kmin) for b in basis_els]
    monomials = sorted(set(target) | set().union(*map(set, cols)))
    rows = [
        [col.get(mono, QQi(0)) for col in cols] + [target.get(mono, QQi(0))]
        for mono in monomials
    ]
    ncols = len(cols)
    pivot_rows = []
    r0 = 0
    for col in range(ncols):
        sel = next((r for r in range(r0, len(rows)) if rows[r][col]), None)
        if sel is None:
            continue
        rows[r0], rows[sel] = rows[sel], rows[r0]
        inv = QQi(1) / rows[r0][col]
        rows[r0] = [x * inv for x in rows[r0]]
        for r in range(len(rows)):
            if r != r0 and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[r0])]
        pivot_rows.append((r0, col))
        r0 += 1
    for r in range(len(rows)):
        if rows[r][ncols] and not any(rows[r][c] for c in range(ncols)):
            return None
    solution = {}
    for r, col in pivot_rows:
        if rows[r][ncols]:
            solution[candidates[col]] = rows[r][ncols]
    return solution


def expand_in_basis(f: LaurentElement, candidates=None):
    """Exact expansion of f over the coefficient basis.

    With explicit candidates the solve runs over that list; otherwise
    candidates are generated per torus-weight cell.  Returns a sorted
    list of (CoeffIndex, QQi) pairs; raises NotInSpanError when f has a
    component outside the family.
    """
    if f.is_zero():
        return []
    coeffs = {}
    residuals = []
    for key, cell in sorted(f.weight_cells().items()):
        cell_cands = (
            [ix for ix in candidates if _index_matches_cell(ix, key)]
            if candidates is not None
            else span_candidates(key)
        )
        solution = _solve_cell(cell, cell_cands)
        if solution is None:
            residuals.append((key, cell))
            continue
        coeffs.update(solution)
    if residuals:
        raise NotInSpanError(
            f"element has components outside the family in cells "
            f"{[key for key, _ in residuals]}",
            residual_cells=residuals,
        )
    return sorted(coeffs.items())


def _index_matches_cell(idx: CoeffIndex, cell_key) -> bool:
    deg, wn, wm = cell_key
    return idx.twon == wn and idx.twom == wm and idx.twol + 2 * idx.k == deg


def try_expand_in_basis(f: LaurentElement, candidates=None):
    """expand_in_basis that returns (coeffs, residual_cells) instead of raising."""
    try:
        return expand_in_basis(f, candidates), []
    except NotInSpanError as err:
        return [], err.residual_cells


# ----------------------------------------------------------------------
# ladder bookkeeping
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class LadderArrow:
    """One arrow of the block action on the (twol, k) lattice."""

    source: CoeffIndex
    target_twol: int
    target_k: int
    coefficient: Fraction


def ladder_coefficients(idx: CoeffIndex, block: str):
    """The arrows of a B- or C-block action per the derivation identities:

        del(f N^k)        = (2l+k+1)/(2l+1) (del f) N^k
                            + k/(2l+1) (Z+ (del+ f) Z+ + Z+ f) N^(k-1)
        Z del(f N^k) Z + 2 Z f N^k
                          = (2l+k+2)/(2l+1) (Z (del f) Z + Z f) N^k
                            + (k+1)/(2l+1) (del+ f) N^(k+1)

    An arrow is omitted when its prefactor vanishes or when the target
    row twol' = twol + 1 would leave the lattice (twol' > -2); the latter
    carries the l = -1 border condition.
    """
    idx.validate()
    if idx.series == Series.SU2:
        raise InvalidIndexError("ladder arrows are defined for the h/a families only")
    twol, k = idx.twol, idx.k
    arrows = []
    if block == "B":
        vert = Fraction(twol + k + 1, twol + 1)
        diag = Fraction(k, twol + 1)
        if vert:
            arrows.append(LadderArrow(idx, twol - 1, k, vert))
        if diag and twol != -2:
            arrows.append(LadderArrow(idx, twol + 1, k - 1, diag))
    elif block == "C":
        vert = Fraction(twol + k + 2, twol + 1)
        diag = Fraction(k + 1, twol + 1)
        if vert and twol != -2:
            arrows.append(LadderArrow(idx, twol + 1, k, vert))
        if diag:
            arrows.append(LadderArrow(idx, twol - 1, k + 1, diag))
    else:
        raise ValueError("block must be 'B' or 'C'")
    return arrows


# ----------------------------------------------------------------------
# invariance sweep
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class InvarianceViolation:
    component: ComponentLabel
    index: CoeffIndex
    generator: str
    reason: str


@dataclass
class InvarianceReport:
    component: ComponentLabel
    checked: int
    violations: list

    @property
    def ok(self):
        return not self.violations


def check_invariance(
    label: ComponentLabel,
    indices,
    generators=None,
    corruption=None,
) -> InvarianceReport:
    """Verify that rho1 images of component basis elements stay inside it.

    Every image is expanded exactly; a failed expansion (outside the
    family) or a nonzero coefficient on an index of another component is
    recorded as a violation.  ``corruption`` is a test hook mapping
    (image, index, generator name) -> image.
    """
    if generators is None:
        generators = elementary_generators()
    violations = []
    checked = 0
    for idx in indices:
        f = _cached_basis(idx)
        for gen in generators:
            checked += 1
            image = rho1_algebra(gen, f)
            if corruption is not None:
                image = corruption(image, idx, gen.name)
            if image.is_zero():
                continue
            coeffs, residuals = try_expand_in_basis(image)
            if residuals:
                violations.append(
                    InvarianceViolation(
                        label,
                        idx,
                        gen.name,
                        "image escapes the coefficient family in cells "
                        + repr([key for key, _ in residuals]),
                    )
                )
                continue
            for target, coeff in coeffs:
                if classify_component(target) != label:
                    violations.append(
                        InvarianceViolation(
                            label,
                            idx,
                            gen.name,
                            f"coefficient {coeff} on {target} of component "
                            f"{classify_component(target).value}",
                        )
                    )
    violations.sort(key=lambda v: (v.index, v.generator, v.reason))
    return InvarianceReport(label, checked, violations)


# ----------------------------------------------------------------------
# group-level action (numeric)
# ----------------------------------------------------------------------


class GroupElement:
    """A GL(2, H_C) element stored with its inverse, block-checked."""

    __slots__ = ("h", "hinv")

    def __init__(self, h, hinv, tol=1e-12):
        self.h = np.asarray(h, dtype=complex)
        self.hinv = np.asarray(hinv, dtype=complex)
        if self.h.shape != (4, 4) or self.hinv.shape != (4, 4):
            raise ValueError("group elements are 4x4 block matrices")
        err = np.max(np.abs(self.h @ self.hinv - np.eye(4)))
        if err > tol:
            raise ValueError(f"h * h^-1 deviates from identity by {err:.3e}")

    @classmethod
    def from_matrix(cls, h):
        h = np.asarray(h, dtype=complex)
        return cls(h, np.linalg.inv(h))

    @classmethod
    def from_generator(cls, x: LieAlgElement, epsilon: float):
        arr = x.to_array() * epsilon
        return cls(_expm(arr), _expm(-arr))

    def blocks(self):
        """((a', b', c', d'), (a, b, c, d)): blocks of h and of h^-1."""
        h, g = self.h, self.hinv
        return (
            (h[:2, :2], h[:2, 2:], h[2:, :2], h[2:, 2:]),
            (g[:2, :2], g[:2, 2:], g[2:, :2], g[2:, 2:]),
        )


def _expm(a):
    """Matrix exponential by scaled Taylor series (small matrices only)."""
    norm = np.max(np.abs(a))
    squarings = max(0, int(np.ceil(np.log2(norm / 0.25))) if norm > 0.25 else 0)
    a = a / (2 ** squarings)
    term = np.eye(a.shape[0], dtype=complex)
    total = term.copy()
    for j in range(1, 24):
        term = term @ a / j
        total += term
    for _ in range(squarings):
        total = total @ total
    return total


class SingularConformalFactor(ArithmeticError):
    pass


def rho1_group(h: GroupElement, f: LaurentElement, point) -> complex:
    """(rho1(h) f)(Z) = f((aZ+b)(cZ+d)^-1) / (N(cZ+d) N(a'-Zc'))."""
    (ap, _bp, cp, _dp), (a, b, c, d) = h.blocks()
    z = np.asarray(
        point.to_array() if hasattr(point, "to_array") else point, dtype=complex
    )
    den1 = c @ z + d
    den2 = ap - z @ cp
    n1 = den1[0, 0] * den1[1, 1] - den1[0, 1] * den1[1, 0]
    n2 = den2[0, 0] * den2[1, 1] - den2[0, 1] * den2[1, 0]
    if abs(n1) == 0 or abs(n2) == 0:
        raise SingularConformalFactor("conformal factor is singular at this point")
    target = (a @ z + b) @ np.linalg.inv(den1)
    return f.evaluate(target) / (n1 * n2)


def rho1_group_derivative(
    x: LieAlgElement, f: LaurentElement, point, epsilon=1e-4
) -> complex:
    """Central finite difference of rho1(exp(t x)) f at t = 0."""
    plus = rho1_group(GroupElement.from_generator(x, epsilon), f, point)
    minus = rho1_group(GroupElement.from_generator(x, -epsilon), f, point)
    return (plus - minus) / (2 * epsilon)
