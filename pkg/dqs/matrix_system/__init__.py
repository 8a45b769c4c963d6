"""Constant matrices, the recurrence matrix A(z; nu) and its structural identities."""

from .constants import S_TILDE, V_TILDE_STAR, MatrixDisplay, constants_checksum
from .identities import IdentityReport, chain_check, check_identities
from .poly_matrix import (
    DEFAULT_MATRICES,
    U,
    Z,
    DiagSpec,
    PolyMatrix,
    RecurrenceMatrices,
    a_matrix,
    a_pencil,
    s_matrix,
    t_matrix,
    v_matrix,
)

__all__ = [
    "DEFAULT_MATRICES",
    "S_TILDE",
    "U",
    "V_TILDE_STAR",
    "Z",
    "DiagSpec",
    "IdentityReport",
    "MatrixDisplay",
    "PolyMatrix",
    "RecurrenceMatrices",
    "a_matrix",
    "a_pencil",
    "chain_check",
    "check_identities",
    "constants_checksum",
    "s_matrix",
    "t_matrix",
    "v_matrix",
]
