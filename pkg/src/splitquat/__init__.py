"""Exact-plus-numeric verification engine for the split quaternionic
function spaces built from SU(1,1) discrete-series matrix coefficients.
"""

__version__ = "0.1.0"

from .scalars import QQi, gen_binom
from .laurent import LaurentElement, box, evaluate, homogeneity_degree, inv_transform
from .matrices import (
    Matrix2,
    PointHC,
    conjugate_plus,
    exact_matrix,
    invert,
    matrix_del,
    matrix_del_plus,
    norm,
)
from .coefficients import (
    CoeffIndex,
    ComponentLabel,
    InvalidIndexError,
    ProportionalityError,
    Series,
    basis_element,
    classify_component,
    conj_inverse_constant,
    dual_element,
    dual_partner_index,
    enumerate_basis,
    t_su2,
    tau,
    tau_at_diagonal,
    tau_value,
)
