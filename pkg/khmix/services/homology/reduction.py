"""Graded elimination of C^- into free summands and pairs b -> U^k c.

Every entry of a graded differential is a monomial whose U-exponent is fixed
by the gradings of its row and column, so the elimination stores only field
scalars. Pivots are taken in order of increasing exponent (then lowest column,
then lowest row); with that order every multiplier is a polynomial.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from typing import Any

from khmix.core.errors import GradingError
from khmix.services.frobenius.upoly import UPoly
from khmix.services.khcomplex.complex import KhComplex
from khmix.services.khcomplex.matrix import Chain

logger = logging.getLogger("khmix.homology")

Vec = dict[int, Any]


@dataclass(frozen=True)
class Pair:
    """A summand b -> U^k c of the reduced basis (k = 0 is contractible)."""

    b: int
    c: int
    k: int


@dataclass
class Decomposition:
    """Basis of C^- adapted to the differential.

    Basis elements keep the index (and the bigrading) of the generator they
    started from. ``rep[e]`` expresses e in the original generators,
    ``cov[e]`` is the coordinate functional of e; both are stored as scalars,
    the U-powers follow from the gradings.
    """

    complex: KhComplex
    free: list[int]
    pairs: list[Pair]
    rep: dict[int, Vec]
    cov: dict[int, Vec]

    @property
    def torsion(self) -> list[Pair]:
        return [p for p in self.pairs if p.k > 0]

    @property
    def max_torsion(self) -> int:
        return max((p.k for p in self.pairs), default=0)

    def qdeg(self, i: int) -> int:
        return self.complex.generators[i].q

    def power(self, q_hi: int, q_lo: int) -> int:
        """n with q_hi = q_lo + n·u_qdeg."""
        u = self.complex.u_qdeg
        if (q_hi - q_lo) % u:
            raise GradingError(f"q-degrees {q_hi} and {q_lo} differ by a non-multiple of {u}")
        return (q_hi - q_lo) // u

    def rep_chain(self, e: int) -> Chain:
        """The basis element e as a chain over R[U]."""
        qe = self.qdeg(e)
        return {g: UPoly.monomial(s, self.power(qe, self.qdeg(g))) for g, s in self.rep[e].items()}

    def coordinate(self, e: int, x: Chain) -> UPoly:
        """Coefficient of basis element e in the chain x."""
        cov = self.cov[e]
        qe = self.qdeg(e)
        out = UPoly()
        for g, coef in x.items():
            s = cov.get(g)
            if s is None:
                continue
            n = self.power(self.qdeg(g), qe)
            out = out + coef * UPoly.monomial(s, n)
        return out


# ----------------------- Public API -----------------------


def reduce_complex(c: KhComplex, log: logging.Logger | None = None) -> Decomposition:
    if c.flavor != "minus":
        raise GradingError("graded elimination runs on the minus flavor")
    log = log or logger
    K = c.table.K
    n = len(c.generators)
    qs = [g.q for g in c.generators]
    u = c.u_qdeg

    def exp(row: int, col: int) -> int:
        return (qs[col] - qs[row]) // u

    cols: dict[int, Vec] = {}
    rows: dict[int, Vec] = {}
    heap: list[tuple[int, int, int]] = []
    for r, col, entry in c.differential.entries():
        stored, coef = entry.monomial_term()
        if entry.half or stored != exp(r, col):
            raise GradingError(f"differential entry ({r},{col}) is not homogeneous")
        cols.setdefault(col, {})[r] = coef
        rows.setdefault(r, {})[col] = coef
        heap.append((stored, col, r))
    heapq.heapify(heap)

    rep: dict[int, Vec] = {i: {i: K.one} for i in range(n)}
    cov: dict[int, Vec] = {i: {i: K.one} for i in range(n)}
    active = set(range(n))
    pairs: list[Pair] = []

    def set_entry(x: int, y: int, value) -> None:
        if value:
            fresh = x not in cols.get(y, {})
            cols.setdefault(y, {})[x] = value
            rows.setdefault(x, {})[y] = value
            if fresh:
                heapq.heappush(heap, (exp(x, y), y, x))
        else:
            cols.get(y, {}).pop(x, None)
            rows.get(x, {}).pop(y, None)

    def drop_col(y: int) -> None:
        for x in cols.pop(y, {}):
            rows[x].pop(y, None)

    def drop_row(x: int) -> None:
        for y in rows.pop(x, {}):
            cols[y].pop(x, None)

    while heap:
        k, b, cc = heapq.heappop(heap)
        a = cols.get(b, {}).get(cc)
        if a is None:
            continue
        inv = K.one / a
        colb = [(x, v) for x, v in cols[b].items() if x != cc]
        rowc = [(y, v) for y, v in rows[cc].items() if y != b]
        for y, dcy in rowc:
            lam = dcy * inv
            for x, dxb in colb:
                set_entry(x, y, cols.get(y, {}).get(x, K.zero) - dxb * lam)
            _axpy(rep[y], -lam, rep[b])
            _axpy(cov[b], lam, cov[y])
        for x, dxb in colb:
            mu = dxb * inv
            _axpy(rep[cc], mu, rep[x])
            _axpy(cov[x], -mu, cov[cc])
        drop_col(b)
        drop_row(cc)
        drop_col(cc)
        drop_row(b)
        rep[b] = {g: s * inv for g, s in rep[b].items()}
        cov[b] = {g: s * a for g, s in cov[b].items()}
        pairs.append(Pair(b, cc, k))
        active.discard(b)
        active.discard(cc)

    free = sorted(active)
    log.debug(
        "reduced %d generators: %d free, %d torsion pairs, %d cancelled",
        n,
        len(free),
        sum(1 for p in pairs if p.k > 0),
        sum(1 for p in pairs if p.k == 0),
    )
    return Decomposition(c, free, pairs, rep, cov)


# ----------------------- Internal helpers -----------------------


def _axpy(target: Vec, coef, src: Vec) -> None:
    if not coef:
        return
    for g, s in src.items():
        v = target.get(g)
        v = s * coef if v is None else v + s * coef
        if v:
            target[g] = v
        else:
            target.pop(g, None)
