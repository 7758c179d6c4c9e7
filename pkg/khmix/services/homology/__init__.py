"""Homology of the deformed complexes: modules, classes, LES maps and orientation generators."""

from khmix.services.homology.module import (
    FLAVORS,
    LES_MAPS,
    GradedModule,
    HomClass,
    KhHomology,
    chain_window,
    homology,
    pole_depth,
)
from khmix.services.homology.orientation import (
    OrientationGenerator,
    canonical_orientation_generators,
    circle_labels,
    orientation_generators,
    oriented_vertex,
)
from khmix.services.homology.reduction import Decomposition, Pair, reduce_complex
from khmix.services.homology.slices import hat_dimensions_by_rank, solve_bounded
from khmix.services.homology.snf import SNFResult, graded_snf


def h_red(hom: KhHomology, convention: str = "sub") -> GradedModule:
    return hom.h_red(convention)


def les_map(hom: KhHomology, kind: str, x: HomClass) -> HomClass:
    return hom.les_map(kind, x)


def plus_is_zero(hom: KhHomology, y) -> tuple[bool, HomClass]:
    return hom.plus_is_zero(y)


def solve_torsion_primitive(hom: KhHomology, z):
    return hom.solve_torsion_primitive(z)


def infty_rank(hom: KhHomology) -> tuple[int, list[int]]:
    return hom.infty_rank()


__all__ = [
    "FLAVORS",
    "LES_MAPS",
    "Decomposition",
    "GradedModule",
    "HomClass",
    "KhHomology",
    "OrientationGenerator",
    "Pair",
    "SNFResult",
    "canonical_orientation_generators",
    "chain_window",
    "circle_labels",
    "graded_snf",
    "h_red",
    "hat_dimensions_by_rank",
    "homology",
    "infty_rank",
    "les_map",
    "orientation_generators",
    "oriented_vertex",
    "plus_is_zero",
    "pole_depth",
    "reduce_complex",
    "solve_bounded",
    "solve_torsion_primitive",
]
