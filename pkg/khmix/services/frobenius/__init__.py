"""Exact scalars, U-polynomials and the Lee / Bar-Natan Frobenius algebras."""

from .algebra import (
    LABEL_NAMES,
    ONE,
    X,
    AlgebraElement,
    DiagonalBasis,
    FrobeniusTable,
    TensorElement,
    Theory,
    build_table,
)
from .scalars import field_spec, format_scalar, parse_field, parse_scalar
from .upoly import UPoly

__all__ = [
    "LABEL_NAMES",
    "ONE",
    "X",
    "AlgebraElement",
    "DiagonalBasis",
    "FrobeniusTable",
    "TensorElement",
    "Theory",
    "UPoly",
    "build_table",
    "field_spec",
    "format_scalar",
    "parse_field",
    "parse_scalar",
]
