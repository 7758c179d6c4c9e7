"""The external grading of Reidemeister III maps.

Seen from the strand of an RIII triangle that passes over both others (or
under both), the two crossings on that strand are external and the third is
internal. The external grading of a generator is the sum of its two
external bits; the cube differential keeps it or raises it by one. An RIII
map is homotopic to one that never raises it, and the grading-preserving
part of such a representative commutes with the external edges of the
two cubes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from khmix.core.errors import MoveError
from khmix.services.khcomplex.complex import KhComplex
from khmix.services.khcomplex.matrix import SparseUMatrix
from khmix.services.movie.homotopy import solve_homotopy
from khmix.services.movie.maps import ChainMap
from khmix.services.movie.moves import Step
from khmix.services.movie.reidemeister import r3_external_crossings

logger = logging.getLogger("khmix.movie")


@dataclass
class SweepReport:
    strand: str
    external_before: tuple[int, int]
    external_after: tuple[int, int]
    raising_entries: int
    filtered: bool
    preserving_commutes: bool
    representative: SparseUMatrix | None = None

    @property
    def passed(self) -> bool:
        return self.filtered and self.preserving_commutes


# ----------------------- Public API -----------------------


def external_grading(c: KhComplex, crossings: tuple[int, int]) -> list[int]:
    pos = [c.diagram.crossing_ids.index(cid) for cid in crossings]
    return [sum(g.vertex[p] for p in pos) for g in c.generators]


def sweep_around_check(step: Step, f: ChainMap, strand: str = "over", log: logging.Logger | None = None) -> SweepReport:
    """Look for a representative of the RIII map ``f`` that never raises the external grading."""
    log = log or logger
    if step.kind != "r3":
        raise MoveError(f"{step.kind} is not an RIII move")
    before = r3_external_crossings(step, False, strand)
    after = r3_external_crossings(step, True, strand)
    ext_s = external_grading(f.source, before)
    ext_t = external_grading(f.target, after)

    def raising(s: int, t: int) -> bool:
        return ext_t[t] > ext_s[s]

    count = sum(1 for t, s, _ in f.matrix.entries() if raising(s, t))
    h = solve_homotopy(f.source, f.target, f.shift, -f.matrix, keep=raising, log=log)
    if h is None:
        log.info("RIII %s strand: %d raising entries, no correcting homotopy", strand, count)
        return SweepReport(strand, before, after, count, False, False)
    g = f.matrix + f.target.differential @ h.matrix + h.matrix @ f.source.differential
    preserving = _part(g, lambda t, s: ext_t[t] == ext_s[s])
    up_s = _part(f.source.differential, lambda t, s: ext_s[t] == ext_s[s] + 1)
    up_t = _part(f.target.differential, lambda t, s: ext_t[t] == ext_t[s] + 1)
    commutes = up_t @ preserving == preserving @ up_s
    log.debug(
        "RIII %s strand: %d raising entries removed by a homotopy with %d unknowns",
        strand,
        count,
        h.unknowns,
    )
    return SweepReport(strand, before, after, count, True, commutes, g)


# ----------------------- Internal helpers -----------------------


def _part(m: SparseUMatrix, keep) -> SparseUMatrix:
    out = SparseUMatrix(m.n_rows, m.n_cols, m.shift)
    for r, c, v in m.entries():
        if keep(r, c):
            out.add(r, c, v)
    return out
