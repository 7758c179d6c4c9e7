"""The deformed Khovanov complex of a planar diagram."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from khmix.core.errors import GradingError
from khmix.core.workers import pooled
from khmix.services.frobenius.algebra import ONE, X, FrobeniusTable
from khmix.services.frobenius.upoly import UPoly
from khmix.services.khcomplex.matrix import Chain, SparseUMatrix
from khmix.services.linkdiag.diagram import PlanarDiagram
from khmix.services.linkdiag.resolution import Resolution, all_vertices, resolve

FLAVORS = ("minus", "hat")

logger = logging.getLogger("khmix.khcomplex")


@dataclass(frozen=True)
class KhGenerator:
    vertex: tuple[int, ...]
    labels: tuple[int, ...]
    h: int
    q: int

    @property
    def delta(self) -> int:
        return self.q - 2 * self.h

    def label_text(self) -> str:
        return "".join("1" if lab == ONE else "X" for lab in self.labels)

    def __str__(self) -> str:
        bits = "".join(str(b) for b in self.vertex)
        return f"({bits}|{self.label_text()})@({self.h},{self.q})"


class KhComplex:
    """Generators of C^-(d) (or its U = 0 specialization) with the differential."""

    def __init__(
        self,
        diagram: PlanarDiagram,
        table: FrobeniusTable,
        flavor: str,
        generators: list[KhGenerator],
        differential: SparseUMatrix,
        resolutions: dict[tuple[int, ...], Resolution],
    ):
        if flavor not in FLAVORS:
            raise GradingError(f"unknown flavor {flavor!r}")
        self.diagram = diagram
        self.table = table
        self.flavor = flavor
        self.generators = generators
        self.differential = differential
        self.resolutions = resolutions
        self.index = {(g.vertex, g.labels): i for i, g in enumerate(generators)}

    @property
    def theory(self):
        return self.table.theory

    @property
    def u_qdeg(self) -> int:
        return self.table.u_qdeg

    def __len__(self) -> int:
        return len(self.generators)

    def grading(self, i: int) -> tuple[int, int]:
        g = self.generators[i]
        return g.h, g.q

    def find(self, vertex: Sequence[int], labels: Sequence[int]) -> int:
        return self.index[(tuple(vertex), tuple(labels))]

    def chain_grading(self, x: Chain) -> tuple[int, int] | None:
        """Bigrading of a homogeneous chain (None for zero); stored exponents are read in U units."""
        found = None
        for i, coef in x.items():
            for stored, _ in coef.items():
                exp = coef.real_exp(stored)
                h, q = self.grading(i)
                gq = q + exp * self.u_qdeg
                if gq.denominator != 1:
                    raise GradingError("chain has a fractional quantum grading")
                here = (h, int(gq))
                if found is None:
                    found = here
                elif found != here:
                    raise GradingError(f"chain is not homogeneous: {found} vs {here}")
        return found

    def d(self, x: Chain) -> Chain:
        return self.differential.apply(x)

    def top_generator(self) -> int:
        """The all-1 resolution with every circle labeled 1."""
        n = len(self.diagram.crossing_ids)
        vertex = (1,) * n
        k = len(self.resolutions[vertex])
        return self.find(vertex, (ONE,) * k)

    def hat(self) -> "KhComplex":
        if self.flavor == "hat":
            return self
        return KhComplex(
            self.diagram,
            self.table,
            "hat",
            self.generators,
            self.differential.specialize_zero(),
            self.resolutions,
        )

    def __repr__(self) -> str:
        return (
            f"KhComplex({self.theory.value}, {self.flavor}, {len(self.generators)} generators, "
            f"nnz={self.differential.nnz})"
        )


# ----------------------- Public API -----------------------


def build_complex(
    d: PlanarDiagram,
    table: FrobeniusTable,
    flavor: str = "minus",
    log: logging.Logger | None = None,
    jobs: int = 1,
) -> KhComplex:
    """The cube of resolutions of ``d``; ``jobs`` threads resolve the vertices."""
    log = log or logger
    n_plus, n_minus = d.n_plus, d.n_minus
    ids = d.crossing_ids
    vertices = all_vertices(len(ids))
    resolutions = dict(zip(vertices, pooled(lambda v: resolve(d, v), vertices, jobs)))
    generators: list[KhGenerator] = []
    for v in vertices:
        res = resolutions[v]
        for labels in label_tuples(len(res)):
            generators.append(make_generator(v, labels, n_plus, n_minus))
    index = {(g.vertex, g.labels): i for i, g in enumerate(generators)}
    dm = SparseUMatrix(len(generators), len(generators), (1, 0))
    hat = flavor == "hat"
    for col, g in enumerate(generators):
        v = g.vertex
        for j, bit in enumerate(v):
            if bit:
                continue
            w = v[:j] + (1,) + v[j + 1:]
            sign = -1 if sum(v[:j]) % 2 else 1
            for labels, coef in edge_image(
                table, d, ids[j], resolutions[v], resolutions[w], g.labels, hat=hat
            ):
                dm.add(index[(w, labels)], col, coef.scale(table.c(sign)))
    log.debug(
        "built %s complex: %d crossings, %d generators, nnz=%d",
        flavor,
        len(ids),
        len(generators),
        dm.nnz,
    )
    return KhComplex(d, table, flavor, generators, dm, resolutions)


def verify_d_squared(c: KhComplex) -> bool:
    return (c.differential @ c.differential).is_zero()


def label_tuples(k: int) -> Iterable[tuple[int, ...]]:
    return itertools.product((ONE, X), repeat=k)


def make_generator(v: tuple[int, ...], labels: tuple[int, ...], n_plus: int, n_minus: int) -> KhGenerator:
    size = sum(v)
    ones = sum(1 for lab in labels if lab == ONE)
    return KhGenerator(
        vertex=v,
        labels=labels,
        h=-n_minus + size,
        q=n_plus - 2 * n_minus + size + ones - (len(labels) - ones),
    )


def merge_terms(table: FrobeniusTable, a: int, b: int, hat: bool = False) -> list[tuple[int, UPoly]]:
    return [
        (lab, table.poly(n, k)) for lab, n, k in table.mul_terms[(a, b)] if not (hat and k > 0)
    ]


def split_terms(table: FrobeniusTable, a: int, hat: bool = False) -> list[tuple[tuple[int, int], UPoly]]:
    return [
        (pair, table.poly(n, k)) for pair, n, k in table.comul_terms[a] if not (hat and k > 0)
    ]


def saddle_image(
    table: FrobeniusTable,
    src: Resolution,
    dst: Resolution,
    circle_map: dict[int, int],
    joined: tuple[int, int],
    parted: tuple[int, int],
    labels: tuple[int, ...],
    hat: bool = False,
) -> list[tuple[tuple[int, ...], UPoly]]:
    """Image of one labeling under a saddle between two resolutions.

    ``circle_map`` sends untouched source circles to target circles,
    ``joined`` holds the source circles at the saddle (equal for a split)
    and ``parted`` the target circles at the saddle (equal for a merge).
    """
    base = [None] * len(dst)
    for c, t in circle_map.items():
        base[t] = labels[c]
    out = []
    if joined[0] != joined[1]:
        target = parted[0]
        for lab, coef in merge_terms(table, labels[joined[0]], labels[joined[1]], hat):
            new = list(base)
            new[target] = lab
            out.append((tuple(new), coef))
    else:
        t1, t2 = parted
        for (l1, l2), coef in split_terms(table, labels[joined[0]], hat):
            new = list(base)
            new[t1] = l1
            new[t2] = l2
            out.append((tuple(new), coef))
    return out


def edge_image(
    table: FrobeniusTable,
    d: PlanarDiagram,
    crossing: int,
    src: Resolution,
    dst: Resolution,
    labels: tuple[int, ...],
    hat: bool = False,
) -> list[tuple[tuple[int, ...], UPoly]]:
    """Image of (v, labels) under the cube edge that changes one crossing 0 -> 1."""
    arcs = d.crossings[crossing].arcs
    joined = (src.circle_of[arcs[0]], src.circle_of[arcs[2]])
    parted = (dst.circle_of[arcs[0]], dst.circle_of[arcs[1]])
    touched = set(joined)
    circle_map = {
        c: dst.circle_of[circle[0]] for c, circle in enumerate(src.circles) if c not in touched
    }
    return saddle_image(table, src, dst, circle_map, joined, parted, labels, hat)
