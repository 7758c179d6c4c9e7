"""Movies: a start diagram, a list of moves and an optional cut."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

from khmix.core.errors import CutError
from khmix.services.frobenius.algebra import FrobeniusTable, Theory, build_table
from khmix.services.frobenius.scalars import parse_field
from khmix.services.linkdiag.diagram import PlanarDiagram
from khmix.services.movie.moves import Move, Step, apply_move

logger = logging.getLogger("khmix.movie")


@dataclass(frozen=True)
class Movie:
    """A movie of elementary cobordisms.

    ``cut`` is a frame index: frame ``k`` is the diagram after the first
    ``k`` moves, so the cut splits the moves into ``moves[:k]`` and
    ``moves[k:]``.
    """

    start: PlanarDiagram = field(compare=False)
    moves: tuple[Move, ...] = ()
    theory: Theory = Theory.BAR_NATAN
    field_spec: str = "q"
    cut: int | None = None
    description: str = ""
    name: str = ""

    def __post_init__(self) -> None:
        if self.cut is not None and not 0 <= self.cut <= len(self.moves):
            raise CutError(f"cut at frame {self.cut} outside 0..{len(self.moves)}")

    def __len__(self) -> int:
        return len(self.moves)

    @cached_property
    def steps(self) -> tuple[Step, ...]:
        return tuple(replay(self.start, self.moves))

    @property
    def frames(self) -> list[PlanarDiagram]:
        return [self.start] + [s.after for s in self.steps]

    @property
    def end(self) -> PlanarDiagram:
        return self.steps[-1].after if self.moves else self.start

    def frame(self, k: int) -> PlanarDiagram:
        return self.frames[k]

    def table(self) -> FrobeniusTable:
        return build_table(self.theory, parse_field(self.field_spec))

    def with_theory(self, theory: Theory | str, field_spec: str | None = None) -> "Movie":
        theory = Theory.parse(theory) if isinstance(theory, str) else theory
        return replace(self, theory=theory, field_spec=field_spec or self.field_spec)

    def with_moves(self, moves: Iterable[Move], cut: int | None = None) -> "Movie":
        return replace(self, moves=tuple(moves), cut=cut)

    def extended(self, *moves: Move) -> "Movie":
        """The same movie with moves appended; earlier ids are pinned to their replay."""
        return replace(self, moves=self.exact_moves() + tuple(moves))

    def exact_moves(self) -> tuple[Move, ...]:
        return tuple(s.replayable() for s in self.steps)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for m in self.moves:
            out[m.kind] = out.get(m.kind, 0) + 1
        return out

    def __repr__(self) -> str:
        cut = f", cut={self.cut}" if self.cut is not None else ""
        return f"Movie({self.name or 'unnamed'}, {len(self.moves)} moves, {self.theory.value}{cut})"


def replay(start: PlanarDiagram, moves: Sequence[Move]) -> list[Step]:
    """Apply the moves in order; frame numbers in errors are the frame a move starts from."""
    steps = []
    d = start
    for k, m in enumerate(moves):
        step = apply_move(d, m, frame=k)
        steps.append(step)
        d = step.after
    logger.debug("replayed %d moves", len(steps))
    return steps
