"""Finite bigrading slices of C^-, C-hat, C^infty and C^+.

In a fixed bigrading every generator g contributes at most one monomial
U^n g, with n fixed by the quantum grading, so each slice is a finite
vector space over the field and all solves are plain linear algebra.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Any

from khmix.core.errors import GradingError
from khmix.services.frobenius.upoly import UPoly
from khmix.services.homology import linalg
from khmix.services.khcomplex.complex import KhComplex
from khmix.services.khcomplex.matrix import Chain

# allowed U powers per flavor: (min, max) with None for unbounded
FLAVOR_RANGE = {"minus": (0, None), "hat": (0, 0), "plus": (None, -1), "infty": (None, None)}


class Slice:
    """The monomials U^n g of one bigrading with n in [lo, hi]."""

    def __init__(self, c: KhComplex, h: int, q: int, lo: int | None, hi: int | None):
        self.c = c
        self.h = h
        self.q = q
        u = c.u_qdeg
        self.basis: list[tuple[int, int]] = []
        for i, g in enumerate(c.generators):
            if g.h != h or (q - g.q) % u:
                continue
            n = (q - g.q) // u
            if lo is not None and n < lo:
                continue
            if hi is not None and n > hi:
                continue
            self.basis.append((i, n))
        self.position = {i: pos for pos, (i, _) in enumerate(self.basis)}

    def __len__(self) -> int:
        return len(self.basis)

    def vector(self, x: Chain) -> dict[int, Any]:
        """Coordinates of the part of x that lies in this slice."""
        out = {}
        for i, coef in x.items():
            pos = self.position.get(i)
            if pos is None:
                continue
            n = self.basis[pos][1]
            v = _coefficient(coef, n)
            if v:
                out[pos] = v
        return out

    def chain(self, vec: dict[int, Any]) -> Chain:
        out: Chain = {}
        for pos, v in vec.items():
            i, n = self.basis[pos]
            out[i] = UPoly.monomial(v, n)
        return out


def differential_columns(c: KhComplex, src: Slice, dst: Slice) -> list[dict[int, Any]]:
    """Matrix of d from one slice to another, column per source monomial."""
    cols = []
    for i, n in src.basis:
        image = c.differential.apply({i: UPoly.monomial(c.table.c(1), n)})
        cols.append(dst.vector(image))
    return cols


def hat_dimensions_by_rank(c: KhComplex) -> dict[tuple[int, int], int]:
    """dim of hat homology per bigrading, by rank-nullity over the field."""
    hat = c.hat()
    K = c.table.K
    lo, hi = FLAVOR_RANGE["hat"]
    grades = sorted({(g.h, g.q) for g in c.generators})
    ranks: dict[tuple[int, int], int] = {}
    for h, q in grades:
        src = Slice(hat, h, q, lo, hi)
        dst = Slice(hat, h + 1, q, lo, hi)
        ranks[(h, q)] = linalg.rank(differential_columns(hat, src, dst), len(dst), K)
    dims = {}
    for h, q in grades:
        size = len(Slice(hat, h, q, lo, hi))
        dim = size - ranks[(h, q)] - ranks.get((h - 1, q), 0)
        if dim:
            dims[(h, q)] = dim
    return dims


def split_by_grading(c: KhComplex, x: Chain) -> dict[tuple[int, int], Chain]:
    """Homogeneous pieces of a chain, keyed by bigrading."""
    pieces: dict[tuple[int, int], Chain] = defaultdict(dict)
    u = c.u_qdeg
    for i, coef in x.items():
        g = c.generators[i]
        for stored, s in coef.items():
            e = coef.real_exp(stored)
            q = g.q + e * u
            if q.denominator != 1:
                raise GradingError("chain has a fractional quantum grading")
            piece = pieces[(g.h, int(q))]
            term = UPoly({stored: s}, half=coef.half)
            piece[i] = piece[i] + term if i in piece else term
    return dict(pieces)


def solve_bounded(c: KhComplex, z: Chain, min_power: int | None) -> Chain | None:
    """x with d x = z and every U-power of x at least ``min_power``, or None."""
    K = c.table.K
    solution: Chain = {}
    for (h, q), piece in split_by_grading(c, z).items():
        src = Slice(c, h - 1, q, min_power, None)
        dst = Slice(c, h, q, min_power, None)
        rhs = dst.vector(piece)
        if _dropped(piece, dst):
            return None
        x = linalg.solve(differential_columns(c, src, dst), rhs, len(dst), K)
        if x is None:
            return None
        for i, coef in src.chain(x).items():
            solution[i] = solution[i] + coef if i in solution else coef
    return solution


def plus_zero_by_window(c: KhComplex, y: Chain, window: int) -> bool:
    """Is y zero in H^+? Searches y = d x mod C^- with x of pole depth <= window."""
    K = c.table.K
    for (h, q), piece in split_by_grading(c, y).items():
        negative = {i: p.truncate(below=0) for i, p in piece.items()}
        negative = {i: p for i, p in negative.items() if p}
        if not negative:
            continue
        src = Slice(c, h - 1, q, -window, -1)
        dst = Slice(c, h, q, None, -1)
        rhs = dst.vector(negative)
        cols = differential_columns(c, src, dst)
        if linalg.solve(cols, rhs, len(dst), K) is None:
            return False
    return True


# ----------------------- Internal helpers -----------------------


def _coefficient(coef: UPoly, n: int):
    if coef.half:
        return coef.coeff(2 * n)
    return coef.coeff(n)


def _dropped(piece: Chain, dst: Slice) -> bool:
    """True when some monomial of the piece lies outside the slice's range."""
    for i, coef in piece.items():
        if i not in dst.position:
            return True
        n = dst.basis[dst.position[i]][1]
        if coef.is_monomial():
            stored, _ = coef.monomial_term()
            if coef.real_exp(stored) != n:
                return True
    return False
