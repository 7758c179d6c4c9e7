"""Chain homotopies found by exact linear solves."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

from khmix.core.errors import GradingError
from khmix.services.frobenius.upoly import UPoly
from khmix.services.homology.linalg import solve
from khmix.services.homology.reduction import reduce_complex
from khmix.services.khcomplex.complex import KhComplex
from khmix.services.khcomplex.matrix import SparseUMatrix
from khmix.services.movie.maps import ChainMap, identity_map

logger = logging.getLogger("khmix.movie")


@dataclass
class Homotopy:
    """H with d H + H d = f - sign·g."""

    matrix: SparseUMatrix
    sign: int
    unknowns: int


@dataclass
class MinimalModel:
    """The free summands and torsion pairs of a complex, with inclusion and projection.

    The original complex is the model plus a contractible summand, so an
    endomorphism is homotopic to ±id exactly when its restriction is.
    """

    complex: KhComplex
    include: SparseUMatrix
    project: SparseUMatrix

    def restrict(self, f: ChainMap) -> ChainMap:
        matrix = self.project @ f.matrix @ self.include
        return ChainMap(self.complex, self.complex, matrix, f.shift, f.label)


# ----------------------- Public API -----------------------


def find_homotopy(f: ChainMap, g: ChainMap, sign: int = 1, log: logging.Logger | None = None) -> Homotopy | None:
    """Solve d_T H + H d_S = f - sign·g for a U-linear H of degree (-1, 0) relative to f."""
    if f.shift != g.shift:
        raise GradingError(f"maps have different shifts {f.shift} and {g.shift}")
    diff = f.matrix - g.matrix.scaled(f.source.table.c(sign))
    return solve_homotopy(f.source, f.target, f.shift, diff, sign=sign, log=log)


def solve_homotopy(
    source: KhComplex,
    target: KhComplex,
    shift: tuple[int, int],
    rhs: SparseUMatrix,
    keep: Callable[[int, int], bool] | None = None,
    sign: int = 1,
    log: logging.Logger | None = None,
) -> Homotopy | None:
    """Solve d_T H + H d_S = rhs on the entries (source gen, target gen) that ``keep`` accepts.

    Without ``keep`` every entry is an equation.
    """
    log = log or logger
    unknowns = _unknowns(source, target, shift)
    rows: dict[tuple[int, int, int], int] = {}

    def row(s: int, t: int, k: int) -> int:
        return rows.setdefault((s, t, k), len(rows))

    def kept(s: int, t: int) -> bool:
        return keep is None or keep(s, t)

    d_t = target.differential
    into: dict[int, list[tuple[int, UPoly]]] = {}
    for r, c, v in source.differential.entries():
        into.setdefault(r, []).append((c, v))
    columns = []
    for s, t, k in unknowns:
        col: dict[int, object] = {}
        for t2, v in d_t.column(t).items():
            if kept(s, t2):
                for j, coef in v.items():
                    _bump(col, row(s, t2, k + j), coef)
        for s0, v in into.get(s, ()):
            if kept(s0, t):
                for j, coef in v.items():
                    _bump(col, row(s0, t, k + j), coef)
        columns.append(col)
    b: dict[int, object] = {}
    for r, c, v in rhs.entries():
        if kept(c, r):
            for j, coef in v.items():
                _bump(b, row(c, r, j), coef)
    x = solve(columns, b, len(rows), source.table.K)
    log.debug("homotopy solve: %d unknowns, %d equations, solvable=%s", len(unknowns), len(rows), x is not None)
    if x is None:
        return None
    h = SparseUMatrix(len(target), len(source), (shift[0] - 1, shift[1]))
    for i, value in x.items():
        s, t, k = unknowns[i]
        h.add(t, s, UPoly.monomial(value, k))
    return Homotopy(h, sign, len(unknowns))


def homotopic_up_to_sign(f: ChainMap, g: ChainMap, log: logging.Logger | None = None) -> int | None:
    """+1 or -1 when f is chain homotopic to ±g, else None."""
    for sign in (1, -1):
        if find_homotopy(f, g, sign, log) is not None:
            return sign
    return None


def verify_homotopy(f: ChainMap, g: ChainMap, h: Homotopy) -> bool:
    left = f.target.differential @ h.matrix + h.matrix @ f.source.differential
    return left == f.matrix - g.matrix.scaled(f.source.table.c(h.sign))


def minimal_model(c: KhComplex, log: logging.Logger | None = None) -> MinimalModel:
    dec = reduce_complex(c, log)
    keep = sorted(dec.free + [e for p in dec.torsion for e in (p.b, p.c)])
    include = SparseUMatrix.from_columns(len(c), (dec.rep_chain(e) for e in keep), (0, 0))
    project = SparseUMatrix(len(keep), len(c), (0, 0))
    for i, e in enumerate(keep):
        for g, s in dec.cov[e].items():
            project.add(i, g, UPoly.monomial(s, dec.power(dec.qdeg(g), dec.qdeg(e))))
    differential = project @ c.differential @ include
    generators = [c.generators[e] for e in keep]
    model = KhComplex(c.diagram, c.table, "minus", generators, differential, c.resolutions)
    return MinimalModel(model, include, project)


def is_homotopy_equivalence(f: ChainMap, g: ChainMap, log: logging.Logger | None = None) -> bool:
    """g∘f ≃ ±id and f∘g ≃ ±id, with explicit homotopies found on minimal models."""
    for a, b in ((f, g), (g, f)):
        model = minimal_model(a.source, log)
        loop = model.restrict(a.then(b))
        if homotopic_up_to_sign(loop, identity_map(model.complex), log) is None:
            return False
    return True


# ----------------------- Internal helpers -----------------------


def _unknowns(source: KhComplex, target: KhComplex, shift: tuple[int, int]) -> list[tuple[int, int, int]]:
    """(source gen, target gen, U power) for every entry H may have."""
    u = source.u_qdeg
    by_h: dict[int, list[int]] = {}
    for t, g in enumerate(target.generators):
        by_h.setdefault(g.h, []).append(t)
    out = []
    for s, g in enumerate(source.generators):
        q_want = g.q + shift[1]
        for t in by_h.get(g.h + shift[0] - 1, ()):
            gap = q_want - target.generators[t].q
            if gap % u or gap // u < 0:
                continue
            out.append((s, t, gap // u))
    return out


def _bump(col: dict[int, object], i: int, v) -> None:
    s = col.get(i)
    s = v if s is None else s + v
    if s:
        col[i] = s
    else:
        col.pop(i, None)
