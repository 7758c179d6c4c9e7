"""Ribbon disks and trim cobordisms of pretzel knots.

A ribbon band between two neighbouring columns of opposite twist turns the
pretzel into an unlink; the disk is that band followed by moves clearing
the unlink, read backwards. A trim smooths one crossing against the
orientation by a saddle across a corner and the kink it leaves.
"""

from __future__ import annotations

import itertools
import logging

from khmix.core.errors import KhmixError, MoveError
from khmix.services.linkdiag.diagram import Dart, PlanarDiagram
from khmix.services.linkdiag.pretzel import Pretzel
from khmix.services.movie.algebra import reverse_movie
from khmix.services.movie.generate import candidate_moves
from khmix.services.movie.movie import Movie
from khmix.services.movie.moves import Move, Step, apply_move, kink_candidates

logger = logging.getLogger("khmix.movie")

# consecutive RIII moves the clearing search tries before giving up on a branch
MAX_R3_RUN = 2


# ----------------------- Public API -----------------------


def clearing_moves(d: PlanarDiagram, max_moves: int = 40) -> list[Move]:
    """Moves taking a diagram of an unlink to the empty diagram without adding crossings."""
    found = _clear(d, max_moves, 0, set())
    if found is None:
        raise MoveError(f"{d!r} does not clear by deletions, deaths and RIII moves")
    logger.debug("cleared %r in %d moves", d, len(found))
    return found


def band_moves(p: Pretzel, left: int) -> list[Move]:
    """A ribbon band between columns ``left`` and ``left + 1`` and the clearing after it."""
    d = p.diagram
    ours, theirs = p.internal_arcs(left), p.internal_arcs(left + 1)
    for face in sorted(d.faces):
        darts = d.face_darts(face)
        for dp, dq in itertools.product(darts, darts):
            if dp[0] not in ours or dq[0] not in theirs:
                continue
            try:
                band = apply_move(d, Move.make("saddle", end1=f"{dp[0]}:{dp[1]}", end2=f"{dq[0]}:{dq[1]}"))
                if len(band.after.components) != 2:
                    continue
                rest = clearing_moves(band.after)
            except KhmixError:
                continue
            logger.debug("ribbon band of %s between columns %d and %d at %s, %s", p.twists, left, left + 1, dp, dq)
            return [band.replayable()] + rest
    raise MoveError(f"no ribbon band between columns {left} and {left + 1} of P{p.twists}")


def ribbon_disk(p: Pretzel, left: int) -> Movie:
    """The slice disk from the empty diagram to the pretzel, banded at columns ``left`` and ``left + 1``."""
    undo = Movie(start=p.diagram, moves=tuple(band_moves(p, left)))
    return reverse_movie(undo)


def trim_moves(d: PlanarDiagram, cid: int) -> list[Move]:
    """Smooth crossing ``cid`` against the orientation: a saddle across a corner and an RI deletion."""
    x = d.crossings[cid]
    for corner in range(4):
        face = d.corner_face(cid, corner)
        ends = [_dart_on(d, x.arcs[corner], face), _dart_on(d, x.arcs[(corner + 1) % 4], face)]
        if None in ends or ends[0][0] == ends[1][0]:
            continue
        (p, sp), (q, sq) = ends
        try:
            saddle = apply_move(d, Move.make("saddle", end1=f"{p}:{sp}", end2=f"{q}:{sq}"))
            loops = kink_candidates(saddle.after, cid)
            if not loops:
                continue
            kink = apply_move(saddle.after, Move.make("r1_del", crossing=cid, arc=loops[0]))
        except KhmixError:
            continue
        if _clean_smoothing(d, kink):
            return [saddle.replayable(), kink.replayable()]
    raise MoveError(f"crossing {cid} has no trim keeping one component")


def trim_cobordism(p: Pretzel, column: int) -> Movie:
    """Trims of every crossing in a column, top to bottom."""
    d = p.diagram
    moves: list[Move] = []
    for cid in p.columns[column]:
        trim = trim_moves(d, cid)
        for m in trim:
            d = apply_move(d, m).after
        moves.extend(trim)
    return Movie(start=p.diagram, moves=tuple(moves))


# ----------------------- Internal helpers -----------------------


def _clear(d: PlanarDiagram, budget: int, r3_run: int, seen: set) -> list[Move] | None:
    if not d.arcs:
        return []
    if budget == 0:
        return None
    key = _key(d)
    if key in seen:
        return None
    seen.add(key)
    moves = candidate_moves(d, ("death", "r1_del", "r2_del"))
    if r3_run < MAX_R3_RUN:
        moves += candidate_moves(d, ("r3",))
    for m in moves:
        try:
            step = apply_move(d, m)
        except KhmixError:
            continue
        rest = _clear(step.after, budget - 1, r3_run + 1 if m.kind == "r3" else 0, seen)
        if rest is not None:
            return [step.replayable()] + rest
    return None


def _key(d: PlanarDiagram) -> tuple:
    return (tuple(sorted((cid, x.token()) for cid, x in d.crossings.items())), tuple(sorted(d.loops)))


def _dart_on(d: PlanarDiagram, arc: int, face: int) -> Dart | None:
    return next(((arc, s) for s in ("l", "r") if d.face_of.get((arc, s)) == face), None)


def _clean_smoothing(before: PlanarDiagram, step: Step) -> bool:
    after = step.after
    if len(after.components) != 1 or len(after.crossings) != len(before.crossings) - 1:
        return False
    return not any(kink_candidates(after, c) for c in after.crossing_ids)
