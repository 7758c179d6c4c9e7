"""Orientation generators of H^infty.

For each orientation o of the link (a set of reversed components), take the
oriented resolution of the reoriented diagram and label each of its circles
A when the black region of the checkerboard coloring lies on the circle's
left, B otherwise. The resulting chain is a cycle of C^infty; these chains
form a basis of H^infty (over R[U^(1/2), U^(-1/2)] for Lee).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from khmix.services.frobenius.algebra import ONE, X, DiagonalBasis, Theory
from khmix.services.frobenius.upoly import UPoly
from khmix.services.homology.module import HomClass, KhHomology
from khmix.services.khcomplex.matrix import Chain
from khmix.services.linkdiag.diagram import PlanarDiagram
from khmix.services.linkdiag.resolution import checkerboard, resolve

logger = logging.getLogger("khmix.homology")

A_LABEL, B_LABEL = 0, 1


@dataclass
class OrientationGenerator:
    reversed: frozenset[int]
    vertex: tuple[int, ...]
    labels: tuple[int, ...]
    chain: Chain
    expected_h: int
    cls: HomClass | None = None

    @property
    def label_text(self) -> str:
        return "".join("A" if lab == A_LABEL else "B" for lab in self.labels)


def oriented_vertex(d: PlanarDiagram, reversed_components: frozenset[int]) -> tuple[int, ...]:
    """0 at crossings that are positive in the reoriented link, 1 at negative ones."""
    return tuple(0 if d.sign(cid, reversed_components) > 0 else 1 for cid in d.crossing_ids)


def circle_labels(d: PlanarDiagram, reversed_components: frozenset[int], vertex) -> tuple[int, ...]:
    res = resolve(d, vertex)
    board = checkerboard(d, res)
    labels = []
    for circle in res.circles:
        arc = circle[0]
        backwards = d.flip.get(arc, 0) ^ (d.component_of[arc] in reversed_components)
        left = (arc, "r") if backwards else (arc, "l")
        black_left = board.face_color(d.face_of[left]) == 1
        labels.append(A_LABEL if black_left else B_LABEL)
    return tuple(labels)


def orientation_generators(
    d: PlanarDiagram, hom: KhHomology, log: logging.Logger | None = None
) -> list[OrientationGenerator]:
    log = log or logger
    table = hom.complex.table
    basis = DiagonalBasis.build(table, half=table.theory is Theory.LEE)
    comps = d.component_ids
    out = []
    for mask in itertools.product((0, 1), repeat=len(comps)):
        rev = frozenset(c for c, bit in zip(comps, mask) if bit)
        vertex = oriented_vertex(d, rev)
        labels = circle_labels(d, rev, vertex)
        chain = _expand(hom, vertex, labels, basis)
        gen = OrientationGenerator(rev, vertex, labels, chain, 2 * d.linking_number(rev))
        gen.cls = hom.classify(chain, "infty")
        out.append(gen)
    log.debug("%d orientation generators for %d components", len(out), len(comps))
    return out


def canonical_orientation_generators(d: PlanarDiagram, hom: KhHomology) -> list[HomClass]:
    """The H^infty classes of the orientation generators, one per orientation of ``d``."""
    return [g.cls for g in orientation_generators(d, hom)]


# ----------------------- Internal helpers -----------------------


def _expand(hom: KhHomology, vertex, labels, basis: DiagonalBasis) -> Chain:
    """Tensor product of A/B over the circles, written in the {1, X} generators."""
    factors = []
    for lab in labels:
        elem = basis.element_of(lab)
        factors.append([(ONE, elem[ONE]), (X, elem[X])])
    out: Chain = {}
    for combo in itertools.product(*factors):
        coef = UPoly.monomial(hom.one, 0, half=basis.half)
        for _, c in combo:
            coef = coef * c
        if coef:
            out[hom.complex.find(vertex, tuple(lab for lab, _ in combo))] = coef
    return out
