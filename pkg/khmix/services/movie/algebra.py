"""Movie algebra: inverses of moves, time reversal, mirroring, concatenation and slicing."""

from __future__ import annotations

import itertools
import logging
from dataclasses import replace
from typing import Iterator

from khmix.core.errors import CutError, KhmixError, MoveError
from khmix.services.linkdiag.diagram import PlanarDiagram
from khmix.services.movie.movie import Movie
from khmix.services.movie.moves import Move, Step, apply_move

logger = logging.getLogger("khmix.movie")

_FLIP_TWIST = {"+": "-", "-": "+"}
_FLIP_OVER = {"1": "2", "2": "1"}


# ----------------------- Public API -----------------------


def inverse_move(step: Step) -> Move:
    """A move taking ``step.after`` back to exactly ``step.before`` (ids included)."""
    for candidate in _candidates(step):
        found = _pin_ids(step, candidate)
        if found is not None:
            return found
    raise MoveError(f"no exact inverse found for {step.move.text()}")


def reverse_movie(movie: Movie) -> Movie:
    """The time-reversed movie, starting from the last frame."""
    moves = [inverse_move(s) for s in reversed(movie.steps)]
    cut = None if movie.cut is None else len(movie) - movie.cut
    out = replace(movie, start=movie.end, moves=tuple(moves), cut=cut, name=_renamed(movie, "reversed"))
    _check_frames(out, list(reversed(movie.frames)))
    return out


def mirror_movie(movie: Movie) -> Movie:
    """Every frame mirrored, order kept."""
    moves = []
    for m in movie.exact_moves():
        if m.kind == "r1_add":
            m = _with_param(m, "twist", _FLIP_TWIST[m.get("twist")])
        elif m.kind == "r2_add":
            m = _with_param(m, "over", _FLIP_OVER[m.get("over")])
        moves.append(m)
    return replace(
        movie, start=movie.start.mirror(), moves=tuple(moves), name=_renamed(movie, "mirror")
    )


def dual_movie(movie: Movie) -> Movie:
    """Time and space mirror: the movie whose plus map is dual to this movie's minus map."""
    return reverse_movie(mirror_movie(movie))


def concatenate(first: Movie, second: Movie) -> Movie:
    if not first.end.same_as(second.start):
        raise MoveError("cannot concatenate: the first movie does not end where the second starts")
    if first.cut is not None and second.cut is not None:
        raise CutError("both movies carry a cut")
    cut = first.cut if first.cut is not None else (
        None if second.cut is None else len(first) + second.cut
    )
    return replace(
        first,
        moves=first.exact_moves() + second.exact_moves(),
        cut=cut,
        name=f"{first.name}+{second.name}" if first.name or second.name else "",
    )


def slice_movie(movie: Movie, i: int, j: int | None = None) -> Movie:
    """Frames i..j of a movie as a movie of its own."""
    j = len(movie) if j is None else j
    if not 0 <= i <= j <= len(movie):
        raise MoveError(f"bad slice {i}..{j} of a movie with {len(movie)} moves")
    cut = movie.cut - i if movie.cut is not None and i <= movie.cut <= j else None
    return replace(
        movie,
        start=movie.frames[i],
        moves=movie.exact_moves()[i:j],
        cut=cut,
        name=_renamed(movie, f"{i}:{j}"),
    )


def halves(movie: Movie) -> tuple[Movie, Movie]:
    if movie.cut is None:
        raise CutError("movie has no cut marker")
    first = slice_movie(movie, 0, movie.cut)
    second = slice_movie(movie, movie.cut)
    return replace(first, cut=None), replace(second, cut=None)


# ----------------------- Internal helpers -----------------------


def _renamed(movie: Movie, tag: str) -> str:
    return f"{movie.name}[{tag}]" if movie.name else ""


def _with_param(m: Move, key: str, value: str) -> Move:
    params = tuple((k, value if k == key else v) for k, v in m.params)
    return Move(m.kind, params, m.ids)


def _check_frames(movie: Movie, expected: list[PlanarDiagram]) -> None:
    for k, (got, want) in enumerate(zip(movie.frames, expected)):
        if not got.same_as(want):
            raise MoveError("reversed movie does not retrace the original frames", k)


def _pin_ids(step: Step, candidate: Move) -> Move | None:
    """Force the candidate's new ids onto the ids that ``step.before`` used."""
    try:
        trial = apply_move(step.after, candidate)
    except KhmixError:
        return None
    if trial.after.same_as(step.before):
        return candidate.with_ids(trial.allocated) if trial.allocated else candidate
    before, after = step.before, step.after
    missing = {
        "arc": sorted(set(before.arcs) - set(after.arcs)),
        "crossing": sorted(set(before.crossings) - set(after.crossings)),
        "face": sorted(set(before.faces) - set(after.faces)),
    }
    slots: dict[str, list[int]] = {"arc": [], "crossing": [], "face": []}
    for pos, kind in enumerate(trial.kinds):
        slots[kind].append(pos)
    for kind, positions in slots.items():
        if len(positions) != len(missing[kind]):
            return None
    for arcs in itertools.permutations(missing["arc"]):
        for crossings in itertools.permutations(missing["crossing"]):
            for faces in itertools.permutations(missing["face"]):
                ids: list[int] = [0] * len(trial.kinds)
                for kind, chosen in (("arc", arcs), ("crossing", crossings), ("face", faces)):
                    for pos, value in zip(slots[kind], chosen):
                        ids[pos] = value
                pinned = candidate.with_ids(ids)
                try:
                    again = apply_move(step.after, pinned)
                except KhmixError:
                    continue
                if again.after.same_as(step.before):
                    return pinned
    return None


def _candidates(step: Step) -> Iterator[Move]:
    kind = step.kind
    after = step.after
    if kind in ("star", "dot", "reorient"):
        yield step.move.with_ids(())
    elif kind == "birth":
        yield Move.make("death", component=step.touched_after[0])
    elif kind == "death":
        yield from _birth_candidates(step)
    elif kind == "r1_add":
        (x,) = step.local_after
        (loop,) = step.interior_after
        yield Move.make("r1_del", crossing=x, arc=loop)
    elif kind == "r1_del":
        yield from _r1_add_candidates(step)
    elif kind == "r2_add":
        alpha, beta = step.local_after
        yield Move.make("r2_del", crossing1=alpha, crossing2=beta)
        yield Move.make("r2_del", crossing1=beta, crossing2=alpha)
    elif kind == "r2_del":
        yield from _r2_add_candidates(step)
    elif kind == "r3":
        faces = {after.face_of[(a, s)] for a in step.interior_after for s in ("l", "r")}
        for face in sorted(faces):
            yield Move.make("r3", face=face)
    elif kind == "saddle":
        yield from _saddle_candidates(step)
    else:
        raise MoveError(f"no inverse rule for {kind}")


def _linked_arcs(step: Step, olds: set[int]) -> list[int]:
    return sorted({new for old, new, _ in step.links if old in olds and new in step.after.arcs})


def _birth_candidates(step: Step) -> Iterator[Move]:
    (comp,) = step.touched_before
    before, after = step.before, step.after
    orient = "-" if before.flip.get(comp, 0) else "+"
    for inner in ("l", "r"):
        disk = before.face_of[(comp, inner)]
        face = before.face_of[(comp, "r" if inner == "l" else "l")]
        if face not in after.faces:
            continue
        outer = "1" if before.outer == disk else "0"
        yield Move.make("birth", face=face, inner=inner, orient=orient, outer=outer)


def _r1_add_candidates(step: Step) -> Iterator[Move]:
    (x,) = step.local_before
    around = set(step.before.crossings[x].arcs)
    for arc in _linked_arcs(step, around):
        for side in ("l", "r"):
            for twist in ("+", "-"):
                yield Move.make("r1_add", arc=arc, side=side, twist=twist)


def _r2_add_candidates(step: Step) -> Iterator[Move]:
    after = step.after
    around = set()
    for cid in step.local_before:
        around.update(step.before.crossings[cid].arcs)
    arcs = _linked_arcs(step, around)
    for p, q in itertools.permutations(arcs, 2):
        common = {after.face_of[(p, s)] for s in ("l", "r")} & {
            after.face_of[(q, s)] for s in ("l", "r")
        }
        for face in sorted(common):
            for over in ("1", "2"):
                yield Move.make("r2_add", arc1=p, arc2=q, face=face, over=over)


def _saddle_candidates(step: Step) -> Iterator[Move]:
    after = step.after
    darts = [(a, s) for a in step.touched_after for s in ("l", "r")]
    for dp, dq in itertools.product(darts, repeat=2):
        if after.face_of[dp] != after.face_of[dq]:
            continue
        if dp[0] == dq[0] and dp[1] != dq[1]:
            continue
        ends = {"end1": f"{dp[0]}:{dp[1]}", "end2": f"{dq[0]}:{dq[1]}"}
        yield Move.make("saddle", **ends)
        # a split undoing an incoherent merge returns one piece reversed
        if len(step.touched_before) == 2:
            for piece in ("1", "2"):
                yield Move.make("saddle", reverse=piece, **ends)
