"""The invariant bilinear pairing <f1, f2> = (i/2 pi^3) Int f1 f2 dV
over the cycle R * U(1,1).

The cycle is parametrized by KAK coordinates

    Z = R e^{i theta} u(phi) a(t) u(psi),
    u(phi) = diag(e^{i phi/2}, e^{-i phi/2}),
    a(t)   = [[cosh(t/2), sinh(t/2)], [sinh(t/2), cosh(t/2)]],

with theta in [0, 2pi), phi, psi in [0, 4pi) (half-integer torus
frequencies need the doubled period) and t substituted by u = tanh(t/2).
On the cycle N(Z) = R^2 e^{2i theta} exactly, so the theta integral is a
pure Fourier selection: only the homogeneous slice of total degree -4 of
f1*f2 survives.  Angular sums over the equispaced grids are evaluated in
their exact Kronecker form; the t integral uses Gauss-Legendre nodes.

The overall constant and orientation are calibrated once against the
reference orthogonality value at (twol, k, m, n) = (-2, 0, 1, 1) and
then frozen; the calibration (coordinate covering multiplicity and
orientation) comes out at exactly 1/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .coefficients import (
    CoeffIndex,
    Series,
    basis_element,
    conj_inverse_constant,
    dual_element,
    dual_partner_index,
    enumerate_basis,
)
from .laurent import LaurentElement
from .lie_action import NotInSpanError, expand_in_basis
from .scalars import QQi


class U11Point(NamedTuple):
    """KAK coordinates (theta, phi, t, psi) on the U(1,1) cycle."""

    theta: float
    phi: float
    t: float
    psi: float


@dataclass(frozen=True)
class QuadratureSpec:
    """Truncation and resolution of the cycle quadrature."""

    T: float = 40.0
    n_t: int = 200
    n_ang: int = 64
    R: float = 1.0

    def __post_init__(self):
        if self.T <= 0 or self.n_t <= 0 or self.n_ang <= 0 or self.R <= 0:
            raise ValueError("quadrature parameters must be positive")
        if self.n_ang % 2:
            raise ValueError("n_ang must be even")


DEFAULT_SPEC = QuadratureSpec()


def u11_parametrize(p: U11Point, R: float = 1.0) -> np.ndarray:
    """The cycle point R e^{i theta} u(phi) a(t) u(psi) as a 2x2 array."""
    c, s = math.cosh(p.t / 2.0), math.sinh(p.t / 2.0)
    alpha = (p.phi + p.psi) / 2.0
    beta = (p.phi - p.psi) / 2.0
    phase = R * np.exp(1j * p.theta)
    return phase * np.array(
        [
            [np.exp(1j * alpha) * c, np.exp(1j * beta) * s],
            [np.exp(-1j * beta) * s, np.exp(-1j * alpha) * c],
        ]
    )


def _parametrize_partials(p: U11Point, R: float):
    """Closed-form d(z11, z12, z21, z22)/d(theta, phi, t, psi)."""
    c, s = math.cosh(p.t / 2.0), math.sinh(p.t / 2.0)
    alpha = (p.phi + p.psi) / 2.0
    beta = (p.phi - p.psi) / 2.0
    phase = R * np.exp(1j * p.theta)
    ea, eb = np.exp(1j * alpha), np.exp(1j * beta)
    z = np.array([ea * c, eb * s, s / eb, c / ea]) * phase
    d_theta = 1j * z
    d_phi = 0.5j * np.array([z[0], z[1], -z[2], -z[3]])
    d_psi = 0.5j * np.array([z[0], -z[1], z[2], -z[3]])
    d_t = 0.5 * phase * np.array([ea * s, eb * c, c / eb, s / ea])
    return np.column_stack([d_theta, d_phi, d_t, d_psi])


def volume_jacobian(p: U11Point, R: float = 1.0) -> complex:
    """Value of the holomorphic 4-form dV = (1/4) dz11^dz12^dz21^dz22 on
    the ordered coordinate tangents (d_theta, d_phi, d_t, d_psi).

    Vanishes identically on the t = 0 coordinate singularity and scales
    as R^4; analytically equals -(i/8) R^4 e^{4 i theta} sinh(t).
    """
    return 0.25 * complex(np.linalg.det(_parametrize_partials(p, R)))


def theta_degree_filter(f: LaurentElement) -> LaurentElement:
    """The total-degree -4 slice: the only part with nonzero theta average."""
    return f.degree_slice(-4)


# ----------------------------------------------------------------------
# quadrature internals
# ----------------------------------------------------------------------

_GRID_CACHE: dict = {}


def _t_grid(spec: QuadratureSpec):
    key = (spec.T, spec.n_t)
    grid = _GRID_CACHE.get(key)
    if grid is None:
        nodes, weights = np.polynomial.legendre.leggauss(spec.n_t)
        umax = math.tanh(spec.T / 2.0)
        u = 0.5 * umax * (nodes + 1.0)
        w = 0.5 * umax * weights
        root = np.sqrt(1.0 - u * u)
        cosh_half = 1.0 / root
        sinh_half = u / root
        sinh_t = 2.0 * sinh_half * cosh_half
        dt_du = 2.0 / (1.0 - u * u)
        grid = (u, w, cosh_half, sinh_half, sinh_t, dt_du)
        _GRID_CACHE[key] = grid
    return grid


def _t_moment(spec: QuadratureSpec, cosh_pow: int, sinh_pow: int) -> float:
    """Gauss-Legendre value of Int cosh^A sinh^B sinh(t) dt over [0, T]."""
    key = ("moment", spec.T, spec.n_t, cosh_pow, sinh_pow)
    val = _GRID_CACHE.get(key)
    if val is None:
        _, w, ch, sh, sinh_t, dt_du = _t_grid(spec)
        val = float(np.sum(w * ch ** cosh_pow * sh ** sinh_pow * sinh_t * dt_du))
        _GRID_CACHE[key] = val
    return val


class PairingResult(NamedTuple):
    value: complex
    converged: bool
    tail_delta: float
    calibration: complex


def _raw_pairing(f1: LaurentElement, f2: LaurentElement, spec: QuadratureSpec):
    """Grid value of (i/2 pi^3) Int f1 f2 dV in cycle coordinates.

    The equispaced phi/psi sums reduce exactly to Kronecker deltas mod
    n_ang (grid aliasing included); the theta integral is the analytic
    degree selection; the t sum is honest Gauss-Legendre.  Scale factors
    of R cancel exactly against the R^4 of the Jacobian on the surviving
    degree -4 slice.  Returns (value, absolutely_integrable).
    """
    sliced = theta_degree_filter(f1 * f2)
    if sliced.is_zero():
        return 0j, True
    total = 0j
    integrable = True
    k = sliced.npower
    n = spec.n_ang
    for (a, b, c, d), coeff in sliced.terms.items():
        wphi = (a - d) + (b - c)  # doubled phi frequency
        wpsi = (a - d) - (b - c)  # doubled psi frequency
        if wphi % n or wpsi % n:
            continue
        if b + c < 0 or k < 0:
            integrable = False
        total += complex(coeff) * _t_moment(spec, a + d, b + c)
    # (i/2pi^3) * (1/4 form factor) * (-i/2 sinh t) * 2pi * (4pi)^2 = 2
    return 2.0 * total, integrable


_CAL_CACHE: dict = {}


def calibration_constant(spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """target/raw on the reference dual pair; frozen per quadrature spec."""
    key = (spec.T, spec.n_t, spec.n_ang)
    cal = _CAL_CACHE.get(key)
    if cal is None:
        ref = CoeffIndex(Series.HOL, -2, 2, 2, 0)
        raw, _ = _raw_pairing(basis_element(ref), dual_element(ref), spec)
        cal = 1.0 / raw
        _CAL_CACHE[key] = cal
    return cal


class PairingConvergenceWarning(UserWarning):
    pass


def pair_numeric(
    f1: LaurentElement,
    f2: LaurentElement,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> complex:
    """Quadrature value of the pairing (calibrated)."""
    raw, _ = _raw_pairing(f1, f2, spec)
    if raw == 0:
        return 0j
    return complex(calibration_constant(spec) * raw)


def pair_numeric_detailed(
    f1: LaurentElement,
    f2: LaurentElement,
    spec: QuadratureSpec = DEFAULT_SPEC,
    tol: float = 1e-9,
) -> PairingResult:
    """Pairing value plus a doubled-T truncation check."""
    cal = calibration_constant(spec)
    raw, integrable = _raw_pairing(f1, f2, spec)
    value = complex(cal * raw) if raw != 0 else 0j
    doubled = QuadratureSpec(2 * spec.T, spec.n_t, spec.n_ang, spec.R)
    raw2, _ = _raw_pairing(f1, f2, doubled)
    value2 = complex(calibration_constant(doubled) * raw2) if raw2 != 0 else 0j
    delta = abs(value2 - value)
    return PairingResult(value, integrable and delta <= tol, delta, cal)


def pairing_tail_ratio(f1, f2, spec: QuadratureSpec = DEFAULT_SPEC):
    """Empirical t-tail decay: |I(T) - I(T/2)| / |I(T/2) - I(T/4)|."""
    vals = []
    for T in (spec.T / 4, spec.T / 2, spec.T):
        raw, _ = _raw_pairing(f1, f2, QuadratureSpec(T, spec.n_t, spec.n_ang, spec.R))
        vals.append(raw)
    d1 = abs(vals[1] - vals[0])
    d2 = abs(vals[2] - vals[1])
    return d2 / d1 if d1 > 0 else 0.0


# ----------------------------------------------------------------------
# exact routes
# ----------------------------------------------------------------------


class OutsideDualFamiliesError(ValueError):
    pass


def pair_exact(f1: LaurentElement, f2: LaurentElement) -> QQi:
    """Pairing via the orthogonality table (exact).

    Both arguments must lie in the coefficient family span; f2 is
    reinterpreted through the dual family tau^l_{m,n}(Z^{-1}) N^{-k-2}
    using the exact inverse-conjugation constants.
    """
    try:
        exp1 = expand_in_basis(f1)
        exp2 = expand_in_basis(f2)
    except NotInSpanError as err:
        raise OutsideDualFamiliesError(
            "pairing arguments must lie in the coefficient family"
        ) from err
    beta = {idx: coeff for idx, coeff in exp2}
    total = QQi(0)
    for idx, a in exp1:
        partner = dual_partner_index(idx)
        b = beta.get(partner)
        if b is None:
            continue
        c = conj_inverse_constant(idx.twol, idx.twom, idx.twon, idx.series)
        total = total + a * b / c * QQi(Fraction(-1, idx.twol + 1))
    return total


def pair_integral_exact(f1: LaurentElement, f2: LaurentElement) -> QQi:
    """Independent exact evaluation of the cycle integral.

    Monomial by monomial the angular integrals are Kronecker deltas and
    the t integral is a Beta value:

        <z^(a,b,b,a) N^k> = b! k! / (b+k+1)!   when 2(a+b) + 2k = -4,

    all other monomials integrate to zero.  Used as an oracle against
    both pair_exact and the quadrature route.
    """
    sliced = theta_degree_filter(f1 * f2)
    total = QQi(0)
    for (a, b, c, d), coeff in sliced.terms.items():
        if a != d or b != c:
            continue
        k = sliced.npower
        if b < 0 or k < 0:
            raise OutsideDualFamiliesError(
                "cycle integral is not absolutely convergent for this pair"
            )
        beta_val = Fraction(
            math.factorial(b) * math.factorial(k), math.factorial(b + k + 1)
        )
        total = total + coeff * QQi(beta_val)
    return total


# ----------------------------------------------------------------------
# orthogonality sweep
# ----------------------------------------------------------------------


def orthogonality_pairs(min_twol, max_absk, mn_offset):
    """All window indices for the orthogonality sweep, both series."""
    idxs = []
    for series in (Series.HOL, Series.ANTIHOL):
        sign = 1 if series == Series.HOL else -1
        for twol in range(-2, min_twol - 1, -1):
            for k in range(-max_absk, max_absk + 1):
                for j_n in range(mn_offset + 1):
                    for j_m in range(mn_offset + 1):
                        idxs.append(
                            CoeffIndex(
                                series,
                                twol,
                                sign * (-twol + 2 * j_n),
                                sign * (-twol + 2 * j_m),
                                k,
                            ).validate()
                        )
    return idxs


def expected_orthogonality(idx1: CoeffIndex, idx2: CoeffIndex) -> Fraction:
    """<basis(idx1), dual(idx2)> = -1/(2l+1) when all indices match."""
    if idx1 == idx2:
        return Fraction(-1, idx1.twol + 1)
    return Fraction(0)
