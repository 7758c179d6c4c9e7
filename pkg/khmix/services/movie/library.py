"""Built-in movies assembled from moves at run time.

Closed unknotted surfaces (sphere, projective planes, Klein bottle, higher
genus and crosscap number), the spun trefoil, boundary sums of Möbius bands
bounded by trefoils, and the two slice disks of 9_46 followed by its trim
cobordism. Every id a later move needs is read back from the step that
created it, so none of these depend on hand-numbered arcs.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import replace
from typing import Callable

from khmix.core.errors import KhmixError, MoveError
from khmix.services.linkdiag.diagram import PlanarDiagram, empty_diagram
from khmix.services.linkdiag.pretzel import Pretzel, pretzel
from khmix.services.movie.algebra import concatenate, mirror_movie, reverse_movie
from khmix.services.movie.movie import Movie
from khmix.services.movie.moves import Move, Step, apply_move
from khmix.services.movie.ribbon import band_moves, ribbon_disk, trim_cobordism
from khmix.services.movie.stats import surface_stats
from khmix.services.movie.templates import with_std_crosscap, with_std_torus

logger = logging.getLogger("khmix.movie")

# normal Euler number of the Möbius band bounded by the right-handed trefoil
TREFOIL_BAND_EULER = -6
# 9_46 as a pretzel; the trims act on the last column
NINE_46 = (3, -3, 3)
TRIM_COLUMN = 2
TRIM_EULER = -6


# ----------------------- Public API -----------------------


def sphere() -> Movie:
    return Movie(
        start=empty_diagram(),
        moves=(Move.make("birth", face="0"), Move.make("death", component=0)),
        name="sphere",
        description="unknotted sphere: a birth followed by a death",
    )


def std_rp2(sign: int = -1) -> Movie:
    """The standard projective plane; ``sign=-1`` has normal Euler number -2."""
    m = with_std_crosscap(_born(), 0, sign)
    name = "std_rp2" if sign < 0 else "std_rp2_mirror"
    return replace(
        _capped(m),
        name=name,
        description=f"standard projective plane, normal Euler number {2 * sign}",
    )


def klein() -> Movie:
    m = with_std_crosscap(_born(), 0, -1)
    m = with_std_crosscap(m, m.end.component_ids[0], 1)
    return replace(
        _capped(m),
        name="klein",
        description="unknotted Klein bottle: crosscaps of both signs, normal Euler number 0",
    )


def trefoil_band_moves(d: PlanarDiagram, normal_euler: int = TREFOIL_BAND_EULER) -> list[Move]:
    """Moves adding a split trefoil to ``d`` through a Möbius band born in its outer face.

    A circle gets a kink and one curl on each lobe; a saddle across the outer
    face joins the curls into the third lobe. The crossing types are chosen
    so the trefoil is alternating and the band has the requested normal
    Euler number.
    """
    for twists in itertools.product("+-", repeat=3):
        steps = _trefoil_band(d, twists)
        if steps is None:
            continue
        moves = [s.replayable() for s in steps]
        trial = Movie(start=d, moves=tuple(moves))
        e = surface_stats(trial).normal_euler
        if e == normal_euler:
            logger.debug("trefoil band twists %s, e=%d", "".join(twists), e)
            return moves
    raise MoveError(f"no trefoil band with normal Euler number {normal_euler}")


def with_trefoil_band(movie: Movie, normal_euler: int = TREFOIL_BAND_EULER) -> Movie:
    return movie.extended(*trefoil_band_moves(movie.end, normal_euler))


def join_components(movie: Movie) -> Movie:
    """Connected sum of two components of the last frame by a saddle across a shared face."""
    d = movie.end
    for face in sorted(d.faces):
        by_comp: dict[int, tuple[int, str]] = {}
        for dart in sorted(d.face_darts(face)):
            by_comp.setdefault(d.component_of[dart[0]], dart)
        if len(by_comp) >= 2:
            (a, sa), (b, sb) = (by_comp[c] for c in sorted(by_comp)[:2])
            return movie.extended(Move.make("saddle", end1=f"{a}:{sa}", end2=f"{b}:{sb}"))
    raise MoveError("no face is shared by two components")


def trefoil_triple() -> Movie:
    """Boundary sum of three trefoil Möbius bands, cut after the first band."""
    m = with_trefoil_band(Movie(start=empty_diagram()))
    cut = len(m)
    for _ in range(2):
        m = join_components(with_trefoil_band(m))
    return replace(
        m.with_moves(m.exact_moves(), cut=cut),
        name="trefoil_triple",
        description="three Möbius bands bounded by trefoils, boundary-summed; cut at the first trefoil",
    )


def trefoil_triple_mirror() -> Movie:
    return replace(
        mirror_movie(trefoil_triple()),
        name="trefoil_triple_mirror",
        description="frame-by-frame mirror of trefoil_triple",
    )


def closed_genus(genus: int) -> Movie:
    """The unknotted closed orientable surface: a circle tubed to itself ``genus`` times."""
    m = _born()
    for _ in range(genus):
        m = with_std_torus(m, m.end.component_ids[0])
    return replace(_capped(m), name=f"genus{genus}", description=f"unknotted closed surface of genus {genus}")


def closed_crosscaps(signs: tuple[int, ...], name: str = "") -> Movie:
    """A connected sum of standard projective planes, cut after the first crosscap."""
    if len(signs) < 2:
        raise MoveError("a cut between crosscaps needs at least two of them")
    m = with_std_crosscap(_born(), 0, signs[0])
    cut = len(m)
    for sign in signs[1:]:
        m = with_std_crosscap(m, m.end.component_ids[0], sign)
    m = _capped(m)
    tag = "".join("+" if s > 0 else "-" for s in signs)
    return replace(
        m.with_moves(m.exact_moves(), cut=cut),
        name=name or f"rp2_sum{len(signs)}",
        description=f"closed sum of {len(signs)} standard projective planes ({tag}), normal Euler number {2 * sum(signs)}",
    )


def spun_trefoil() -> Movie:
    """The knotted sphere doubling a ribbon disk of 3_1#m(3_1): the spun trefoil."""
    p = pretzel(3, -3, 0)
    undo = Movie(start=p.diagram, moves=tuple(band_moves(p, 0)))
    return replace(
        concatenate(reverse_movie(undo), undo),
        name="spun_trefoil",
        description="spun trefoil: a ribbon disk of 3_1#m(3_1) glued to its reverse",
    )


def nine_46() -> tuple[Pretzel, Movie]:
    """9_46 and the trim cobordism to 3_1#m(3_1), mirrored if needed so that e(C) = -6."""
    base = pretzel(*NINE_46)
    for p in (base, base.mirror()):
        trims = trim_cobordism(p, TRIM_COLUMN)
        if surface_stats(trims).normal_euler == TRIM_EULER:
            return p, replace(trims, name="nine_46_trims", description="three trims from 9_46 to 3_1#m(3_1)")
    raise MoveError(f"no mirror of P{NINE_46} has trims with normal Euler number {TRIM_EULER}")


def sundberg_swann(side: str) -> Movie:
    """A slice disk of 9_46 followed by the trims, cut after the first trim.

    The left disk bands the first two columns, the right disk the last two.
    """
    if side not in ("left", "right"):
        raise KhmixError(f"side must be left or right, got {side!r}")
    p, trims = nine_46()
    disk = ribbon_disk(p, 0 if side == "left" else 1)
    m = concatenate(disk, trims)
    return replace(
        m.with_moves(m.exact_moves(), cut=len(disk) + 2),
        name=f"sundberg_swann_{side}",
        description=f"{side} slice disk of 9_46 then three trims to 3_1#m(3_1); cut after the first trim",
    )


BUILTIN_MOVIES: dict[str, Callable[[], Movie]] = {
    "std_rp2": std_rp2,
    "std_rp2_mirror": lambda: std_rp2(1),
    "klein": klein,
    "genus2": lambda: closed_genus(2),
    "genus3": lambda: closed_genus(3),
    "rp2_triple": lambda: closed_crosscaps((-1, -1, -1), "rp2_triple"),
    "rp2_triple_mixed": lambda: closed_crosscaps((-1, -1, 1), "rp2_triple_mixed"),
    "spun_trefoil": spun_trefoil,
    "trefoil_triple": trefoil_triple,
    "trefoil_triple_mirror": trefoil_triple_mirror,
    "sundberg_swann_left": lambda: sundberg_swann("left"),
    "sundberg_swann_right": lambda: sundberg_swann("right"),
}


def builtin_movie(name: str) -> Movie:
    try:
        build = BUILTIN_MOVIES[name]
    except KeyError:
        raise KhmixError(f"no built-in movie {name!r}") from None
    return build()


# ----------------------- Internal helpers -----------------------


def _born() -> Movie:
    return Movie(start=empty_diagram(), moves=(Move.make("birth", face="0"),))


def _capped(movie: Movie) -> Movie:
    return movie.extended(Move.make("death", component=movie.end.component_ids[0]))


def _outside(d: PlanarDiagram, loop: int) -> str:
    """The side of a kink loop that is not its monogon."""
    return next(s for s in ("l", "r") if d.face_size(d.face_of[(loop, s)]) != 1)


def _trefoil_band(d: PlanarDiagram, twists: tuple[str, ...]) -> list[Step] | None:
    t3, t2, t1 = twists
    try:
        born = apply_move(d, Move.make("birth", face=str(d.outer), inner="l"))
        (circle,) = born.touched_after
        kink = apply_move(born.after, Move.make("r1_add", arc=circle, side="r", twist=t3))
        (lobe,) = kink.interior_after
        d2 = kink.after
        outer = d2.face_of[(lobe, _outside(d2, lobe))]
        side = next(s for s in ("l", "r") if d2.face_of[(circle, s)] == outer)
        curl2 = apply_move(d2, Move.make("r1_add", arc=circle, side=side, twist=t2))
        (loop2,) = curl2.interior_after
        d3 = curl2.after
        curl1 = apply_move(d3, Move.make("r1_add", arc=lobe, side=_outside(d3, lobe), twist=t1))
        (loop1,) = curl1.interior_after
        d4 = curl1.after
        s2, s1 = _outside(d4, loop2), _outside(d4, loop1)
        if d4.face_of[(loop2, s2)] != d4.face_of[(loop1, s1)]:
            return None
        band = apply_move(d4, Move.make("saddle", end1=f"{loop2}:{s2}", end2=f"{loop1}:{s1}"))
    except (MoveError, StopIteration):
        return None
    steps = [born, kink, curl2, curl1, band]
    return steps if _alternating(band.after, band.touched_after[0]) else None


def _alternating(d: PlanarDiagram, arc: int) -> bool:
    comp = set(d.component_arcs(d.component_of[arc]))
    crossings = [cid for cid, x in d.crossings.items() if comp.issuperset(x.arcs)]
    if len(crossings) != 3:
        return False
    for a in comp:
        if a in d.loops:
            return False
        (hc, hs), (tc, ts) = d.heads[a], d.tails[a]
        if d.crossings[hc].is_over_slot(hs) == d.crossings[tc].is_over_slot(ts):
            return False
    return True
