"""Seeded random diagrams and movies for the property suites."""

from __future__ import annotations

import itertools
import logging
from typing import Iterable

import numpy as np

from khmix.core.errors import KhmixError
from khmix.services.frobenius.algebra import Theory
from khmix.services.linkdiag.diagram import PlanarDiagram, empty_diagram
from khmix.services.movie.movie import Movie
from khmix.services.movie.moves import Move, apply_move, bigon_between, kink_candidates, r3_data

logger = logging.getLogger("khmix.movie")

DIAGRAM_KINDS = ("birth", "r1_add", "r2_add", "saddle")
MOVIE_KINDS = ("r1_add", "r1_del", "r2_add", "r2_del", "r3", "birth", "death", "saddle", "star", "reorient")


# ----------------------- Public API -----------------------


def candidate_moves(d: PlanarDiagram, kinds: Iterable[str] = MOVIE_KINDS, max_crossings: int = 6) -> list[Move]:
    """Moves of the given kinds that apply to ``d`` and keep it within ``max_crossings``."""
    kinds = set(kinds)
    room = max_crossings - len(d.crossings)
    out: list[Move] = []
    if "r1_add" in kinds and room >= 1:
        for arc in d.arcs:
            for side, twist in itertools.product("lr", "+-"):
                out.append(Move.make("r1_add", arc=arc, side=side, twist=twist))
    if "r1_del" in kinds:
        for cid in d.crossing_ids:
            for loop in kink_candidates(d, cid):
                out.append(Move.make("r1_del", crossing=cid, arc=loop))
    if "r2_add" in kinds and room >= 2:
        for face in sorted(d.faces):
            arcs = sorted({a for a, _ in d.face_darts(face)})
            for p, q in itertools.permutations(arcs, 2):
                for over in "12":
                    out.append(Move.make("r2_add", arc1=p, arc2=q, face=face, over=over))
    if "r2_del" in kinds:
        for c1, c2 in itertools.combinations(d.crossing_ids, 2):
            if bigon_between(d, c1, c2) is not None:
                out.append(Move.make("r2_del", crossing1=c1, crossing2=c2))
    if "r3" in kinds:
        for face in sorted(d.faces):
            try:
                r3_data(d, face)
            except KhmixError:
                continue
            out.append(Move.make("r3", face=face))
    if "birth" in kinds:
        for face in sorted(d.faces):
            out.append(Move.make("birth", face=face))
    if "death" in kinds:
        for loop in sorted(d.loops):
            out.append(Move.make("death", component=loop))
    if "saddle" in kinds:
        for face in sorted(d.faces):
            darts = d.face_darts(face)
            for dp, dq in itertools.combinations(darts, 2):
                if dp[0] == dq[0] and dp[1] != dq[1]:
                    continue
                out.append(Move.make("saddle", end1=f"{dp[0]}:{dp[1]}", end2=f"{dq[0]}:{dq[1]}"))
    for kind in ("star", "dot"):
        if kind in kinds:
            out.extend(Move.make(kind, arc=arc) for arc in d.arcs)
    if "reorient" in kinds:
        out.extend(Move.make("reorient", component=c) for c in d.component_ids)
    return out


def random_move(
    rng: np.random.Generator,
    d: PlanarDiagram,
    kinds: Iterable[str] = MOVIE_KINDS,
    max_crossings: int = 6,
) -> Move | None:
    """A uniformly chosen kind, then a uniformly chosen applicable move of that kind."""
    by_kind: dict[str, list[Move]] = {}
    for m in candidate_moves(d, kinds, max_crossings):
        by_kind.setdefault(m.kind, []).append(m)
    kinds_left = sorted(by_kind)
    while kinds_left:
        kind = kinds_left.pop(int(rng.integers(len(kinds_left))))
        moves = by_kind[kind]
        order = rng.permutation(len(moves))
        for i in order:
            try:
                apply_move(d, moves[int(i)])
            except KhmixError:
                continue
            return moves[int(i)]
    return None


def random_movie(
    rng: np.random.Generator,
    length: int,
    start: PlanarDiagram | None = None,
    kinds: Iterable[str] = MOVIE_KINDS,
    max_crossings: int = 6,
    theory: Theory = Theory.BAR_NATAN,
    name: str = "",
) -> Movie:
    d = start if start is not None else empty_diagram()
    first = d
    moves = []
    for _ in range(length):
        m = random_move(rng, d, kinds, max_crossings)
        if m is None:
            break
        step = apply_move(d, m)
        moves.append(step.replayable())
        d = step.after
    return Movie(start=first, moves=tuple(moves), theory=theory, name=name or "random")


def random_diagram(rng: np.random.Generator, max_crossings: int = 4, steps: int = 6) -> PlanarDiagram:
    """The last frame of a random movie of births, kinks, bigons and saddles."""
    movie = random_movie(rng, steps, kinds=DIAGRAM_KINDS, max_crossings=max_crossings)
    d = movie.end
    if not d.arcs:
        d = apply_move(d, Move.make("birth", face=min(d.faces))).after
    logger.debug("random diagram: %r", d)
    return d


def make_rng(seed: int | None = None) -> np.random.Generator:
    return np.random.default_rng(seed)
