"""Local surface modifications spliced into a movie at a frame.

A splice inserts moves at frame ``k`` and keeps the rest of the movie
replayable: the inserted moves must bring the frame back to exactly the
diagram they started from (a trailing reorientation is added when only the
orientation of one component differs), and the remaining moves are replayed
with their ids pinned. Inserting at the last frame needs no restoration.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Sequence

from khmix.core.errors import KhmixError, MoveError
from khmix.services.linkdiag.diagram import PlanarDiagram
from khmix.services.linkdiag.parser import face_ref, parse_dart
from khmix.services.movie.algebra import inverse_move
from khmix.services.movie.movie import Movie, replay
from khmix.services.movie.moves import Move, Step, apply_move, kink_candidates

logger = logging.getLogger("khmix.movie")


# ----------------------- Public API -----------------------


def splice(movie: Movie, frame: int, moves: Sequence[Move], tag: str = "") -> Movie:
    """Insert ``moves`` at ``frame``; they must restore the frame unless it is the last one."""
    if not 0 <= frame <= len(movie):
        raise MoveError(f"frame {frame} outside 0..{len(movie)}")
    exact = movie.exact_moves()
    here = movie.frames[frame]
    steps = replay(here, moves)
    inserted = [s.replayable() for s in steps]
    end = steps[-1].after if steps else here
    if frame < len(movie) and not end.same_as(here):
        fix = _reorientation_fix(end, here)
        if fix is None:
            raise MoveError(f"inserted moves do not restore frame {frame}", frame)
        inserted.append(fix)
    cut = movie.cut
    if cut is not None and cut > frame:
        cut += len(inserted)
    name = f"{movie.name}[{tag}@{frame}]" if movie.name and tag else movie.name
    out = replace(movie, moves=tuple(exact[:frame]) + tuple(inserted) + tuple(exact[frame:]), cut=cut, name=name)
    logger.debug("spliced %d moves at frame %d of %r", len(inserted), frame, movie)
    return out


def with_star(movie: Movie, arc: int, frame: int | None = None) -> Movie:
    frame = len(movie) if frame is None else frame
    return splice(movie, frame, [Move.make("star", arc=arc)], "star")


def with_dot(movie: Movie, arc: int, frame: int | None = None) -> Movie:
    frame = len(movie) if frame is None else frame
    return splice(movie, frame, [Move.make("dot", arc=arc)], "dot")


def with_tube(movie: Movie, end1: str, end2: str, frame: int | None = None) -> Movie:
    """A tube between two arc sides on a common face: a saddle followed by its inverse."""
    frame = len(movie) if frame is None else frame
    here = movie.frames[frame]
    first = apply_move(here, Move.make("saddle", end1=end1, end2=end2), frame=frame)
    back = inverse_move(first)
    return splice(movie, frame, [first.replayable(), back], "tube")


def with_std_torus(movie: Movie, arc: int, side: str = "l", frame: int | None = None) -> Movie:
    """Connected sum with an unknotted torus: a tube with both feet next to one arc."""
    end = f"{arc}:{side}"
    return with_tube(movie, end, end, frame)


def crosscap_moves(d: PlanarDiagram, arc: int, sign: int = -1, side: str = "l") -> list[Move]:
    """A kink on ``arc``, a saddle across the kink's outer corner, and the kink removed.

    ``sign=-1`` gives a normal Euler number contribution of -2, ``sign=+1`` of +2.
    """
    twist = "-" if sign < 0 else "+"
    moves = [Move.make("r1_add", arc=arc, side=side, twist=twist)]
    kink = apply_move(d, moves[0])
    after = kink.after
    (x,) = kink.local_after
    (loop,) = kink.interior_after
    out_side = next(s for s in ("l", "r") if after.face_size(after.face_of[(loop, s)]) != 1)
    outside = after.face_of[(loop, out_side)]
    other = next((a for a in after.crossings[x].arcs if a not in (loop, arc)), arc)
    other_side = next((s for s in ("l", "r") if after.face_of[(other, s)] == outside), None)
    if other_side is None:
        raise MoveError(f"no outer corner between the kink and arc {other}")
    saddle = Move.make("saddle", end1=f"{loop}:{out_side}", end2=f"{other}:{other_side}")
    twisted = apply_move(after, saddle)
    moves = [kink.replayable(), twisted.replayable()]
    loops = _kinks(twisted.after)
    if not loops:
        raise MoveError("the crosscap saddle did not leave a removable kink")
    cid, loop_arc = loops[0]
    moves.append(Move.make("r1_del", crossing=cid, arc=loop_arc))
    return moves


def with_std_crosscap(movie: Movie, arc: int, sign: int = -1, frame: int | None = None, side: str = "l") -> Movie:
    frame = len(movie) if frame is None else frame
    moves = crosscap_moves(movie.frames[frame], arc, sign, side)
    return splice(movie, frame, moves, "crosscap")


def with_connect_sum(movie: Movie, closed: Movie, arc: int, side: str = "l", frame: int | None = None) -> Movie:
    """Connected sum with a closed surface movie (empty to empty) next to ``arc``.

    The closed movie's first move must be a birth; its circle is tubed to
    ``arc`` right after the birth.
    """
    frame = len(movie) if frame is None else frame
    if closed.start.arcs or closed.end.arcs:
        raise MoveError("connected sum needs a closed surface movie")
    if not closed.moves or closed.moves[0].kind != "birth":
        raise MoveError("the closed movie must start with a birth")
    here = movie.frames[frame]
    face = here.face_of[(arc, side)]
    moves = _transplant(closed, here, face)
    d = here
    steps = []
    for m in moves:
        steps.append(apply_move(d, m))
        d = steps[-1].after
    circle = steps[0].touched_after[0]
    born = steps[0].after
    circle_side = next(s for s in ("l", "r") if born.face_of[(circle, s)] == born.face_of[(arc, side)])
    tube_first = apply_move(born, Move.make("saddle", end1=f"{circle}:{circle_side}", end2=f"{arc}:{side}"))
    tube = [tube_first.replayable(), inverse_move(tube_first)]
    spliced = [steps[0].replayable()] + tube + [s.replayable() for s in steps[1:]]
    try:
        return splice(movie, frame, spliced, f"#{closed.name or 'closed'}")
    except KhmixError as exc:
        raise MoveError(f"connected sum at arc {arc} failed: {exc}") from exc


# ----------------------- Internal helpers -----------------------


def _kinks(d: PlanarDiagram) -> list[tuple[int, int]]:
    out = []
    for cid in d.crossing_ids:
        for loop in kink_candidates(d, cid):
            out.append((cid, loop))
    return out


def _reorientation_fix(end: PlanarDiagram, want: PlanarDiagram) -> Move | None:
    for comp in end.component_ids:
        if end.reoriented([comp]).same_as(want):
            return Move.make("reorient", component=comp)
    return None


def _transplant(closed: Movie, host: PlanarDiagram, face: int) -> list[Move]:
    """The closed movie's moves rewritten to run inside ``face`` of ``host``."""
    arcs: dict[int, int] = {}
    crossings: dict[int, int] = {}
    d = host
    out = []
    for step in closed.steps:
        m = _translate(step, arcs, crossings, face, d)
        done = apply_move(d, m)
        for (src, kind), dst in zip(zip(step.allocated, step.kinds), done.allocated):
            if kind == "arc":
                arcs[src] = dst
            elif kind == "crossing":
                crossings[src] = dst
        out.append(m)
        d = done.after
    return out


def _translate(step: Step, arcs: dict[int, int], crossings: dict[int, int], face: int, host: PlanarDiagram) -> Move:
    m = step.move
    params = {}
    for key, value in m.params:
        if key in ("arc", "arc1", "arc2"):
            params[key] = arcs[int(value)]
        elif key in ("crossing", "crossing1", "crossing2"):
            params[key] = crossings[int(value)]
        elif key == "component":
            params[key] = host.component_of[arcs[int(value)]]
        elif key in ("end1", "end2"):
            a, s = parse_dart(value)
            params[key] = f"{arcs[a]}:{s}"
        elif key == "face":
            darts = step.before.face_darts(face_ref(step.before, value))
            if not darts:
                params[key] = str(face)
            else:
                a, s = darts[0]
                params[key] = f"{arcs[a]}:{s}"
        else:
            params[key] = value
    if m.kind == "birth":
        params["outer"] = "0"
    return Move.make(m.kind, **params)
