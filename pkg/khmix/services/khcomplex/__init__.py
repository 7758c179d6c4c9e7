"""Deformed Khovanov complexes, sparse U-matrices and mirror duality."""

from khmix.services.khcomplex.complex import (
    FLAVORS,
    KhComplex,
    KhGenerator,
    build_complex,
    edge_image,
    label_tuples,
    make_generator,
    merge_terms,
    saddle_image,
    split_terms,
    verify_d_squared,
)
from khmix.services.khcomplex.duality import MirrorDual, mirror_dual
from khmix.services.khcomplex.matrix import (
    Chain,
    SparseUMatrix,
    chain_add,
    chain_equal,
    chain_equal_up_to_sign,
    chain_iadd,
    chain_neg,
    chain_scale,
)

__all__ = [
    "FLAVORS",
    "Chain",
    "KhComplex",
    "KhGenerator",
    "MirrorDual",
    "SparseUMatrix",
    "build_complex",
    "chain_add",
    "chain_equal",
    "chain_equal_up_to_sign",
    "chain_iadd",
    "chain_neg",
    "chain_scale",
    "edge_image",
    "label_tuples",
    "make_generator",
    "merge_terms",
    "mirror_dual",
    "saddle_image",
    "split_terms",
    "verify_d_squared",
]
