"""Planar link diagrams: PD text, faces, resolutions and checkerboard colorings."""

from khmix.services.linkdiag.diagram import (
    OTHER_SIDE,
    Crossing,
    Dart,
    PlanarDiagram,
    assemble,
    empty_diagram,
)
from khmix.services.linkdiag.parser import dart_ref, emit_pd, face_ref, parse_dart, parse_pd
from khmix.services.linkdiag.pretzel import Pretzel, pretzel
from khmix.services.linkdiag.resolution import (
    Checkerboard,
    Resolution,
    all_vertices,
    checkerboard,
    resolve,
)


def writhe(d: PlanarDiagram) -> int:
    return d.writhe()


def linking_number(d: PlanarDiagram, sub) -> int:
    return d.linking_number(sub)


def mirror(d: PlanarDiagram) -> PlanarDiagram:
    return d.mirror()


__all__ = [
    "OTHER_SIDE",
    "Checkerboard",
    "Crossing",
    "Dart",
    "PlanarDiagram",
    "Pretzel",
    "Resolution",
    "all_vertices",
    "assemble",
    "checkerboard",
    "dart_ref",
    "emit_pd",
    "empty_diagram",
    "face_ref",
    "linking_number",
    "mirror",
    "parse_dart",
    "parse_pd",
    "pretzel",
    "resolve",
    "writhe",
]
