"""Exact computations with translation-invariant Clifford quantum cellular automata.

Unitaries are matrices over Laurent polynomial rings F_p[x1^±1, ..., xd^±1]
preserving the forms λ (commutation) and, for the η flavor, η.
"""

from .ascent import ascend_form, ascend_unitary_hermitian, ascend_unitary_quadratic, embed
from .classify import (
    BlendCertificate,
    BlendObstruction,
    ClassDescriptor,
    UnsupportedDimension,
    blend_certificate,
    cg_kill_check,
    classify,
    representative,
    table,
)
from .descent import (
    boundary_form,
    boundary_module_of_unitary,
    boundary_via_separator,
    descend_form,
    formation_to_unitary,
    lagrangian_pair_from_form,
)
from .forms import Form, WittClass, assoc, eta, lam, witt_class, witt_negative
from .matrix import PolyMatrix, coarse_grain, form_dsum, hat_dsum, z_spread
from .ring import LaurentPoly, ParseError, RingCtx
from .unitary import (
    Circuit,
    Token,
    Unitary,
    check_eta,
    check_lambda,
    cluster_qca,
    decompose_1d,
    eval_circuit,
    gen_H,
    gen_X,
    gen_Z,
    gen_Zdag,
    gen_Ztilde,
    normalize_real,
    pauli_to_unitary,
    unitary_to_pauli,
)

__all__ = [name for name in dir() if not name.startswith("_")]
