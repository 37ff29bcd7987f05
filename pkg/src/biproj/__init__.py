"""Finite-field toolkit for (q,q)-biprojective APN functions over GF(2^l) x GF(2^l)."""

from .gf2l import FieldElement, FieldSpec, SubfieldParams, field
from .projective import INF, GLMatrix, QProjectivePoly, Stratum, canonicalize, representative_set
from .biprojective import (
    BiprojectiveFunction,
    act,
    butterfly,
    gleq_equivalent,
    gold,
    is_apn_naive,
    is_apn_projective,
    kappa,
    pencil_signature,
)

__version__ = "0.1.0"
