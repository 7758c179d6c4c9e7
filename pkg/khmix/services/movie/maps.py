"""Chain maps of elementary cobordisms and their composites along a movie."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from khmix.core.errors import GradingError, MoveError
from khmix.core.workers import pooled
from khmix.services.frobenius.algebra import ONE, FrobeniusTable
from khmix.services.khcomplex.complex import KhComplex, build_complex, saddle_image
from khmix.services.khcomplex.matrix import Chain, SparseUMatrix, chain_iadd
from khmix.services.linkdiag.diagram import PlanarDiagram
from khmix.services.linkdiag.parser import emit_pd
from khmix.services.linkdiag.resolution import Resolution
from khmix.services.movie.movie import Movie
from khmix.services.movie.moves import Step
from khmix.services.movie.reidemeister import reidemeister_matrix

logger = logging.getLogger("khmix.movie")

R_MOVES = ("r1_add", "r1_del", "r2_add", "r2_del", "r3")


@dataclass
class ChainMap:
    """A U-linear map between two complexes; ``matrix`` columns are source generators."""

    source: KhComplex
    target: KhComplex
    matrix: SparseUMatrix
    shift: tuple[int, int]
    label: str = ""

    def apply(self, x: Chain) -> Chain:
        return self.matrix.apply(x)

    def __call__(self, x: Chain) -> Chain:
        return self.apply(x)

    @property
    def delta_shift(self) -> int:
        return self.shift[1] - 2 * self.shift[0]

    def hat(self) -> "ChainMap":
        return ChainMap(
            self.source.hat(), self.target.hat(), self.matrix.specialize_zero(), self.shift, self.label
        )

    def is_chain_map(self) -> bool:
        left = self.target.differential @ self.matrix
        right = self.matrix @ self.source.differential
        return left == right

    def is_graded(self) -> bool:
        """Every entry shifts (h, q) by exactly ``shift``."""
        u = self.source.u_qdeg
        for r, c, v in self.matrix.entries():
            hs, qs = self.source.grading(c)
            ht, qt = self.target.grading(r)
            if ht - hs != self.shift[0]:
                return False
            for stored, _ in v.items():
                if qt + v.real_exp(stored) * u - qs != self.shift[1]:
                    return False
        return True

    def then(self, other: "ChainMap") -> "ChainMap":
        """``other ∘ self``."""
        if other.source is not self.target and len(other.source) != len(self.target):
            raise MoveError("cannot compose: complexes do not match")
        label = " ; ".join(x for x in (self.label, other.label) if x)
        return ChainMap(
            self.source,
            other.target,
            other.matrix @ self.matrix,
            (self.shift[0] + other.shift[0], self.shift[1] + other.shift[1]),
            label,
        )

    def __repr__(self) -> str:
        return (
            f"ChainMap({self.label or 'map'}: {len(self.source)} -> {len(self.target)}, "
            f"shift={self.shift}, nnz={self.matrix.nnz})"
        )


def identity_map(c: KhComplex) -> ChainMap:
    return ChainMap(c, c, SparseUMatrix.identity(len(c), c.table.c(1)), (0, 0), "id")


# ----------------------- Public API -----------------------


def declared_shift(step: Step) -> tuple[int, int]:
    """Bigrading change of the chain map of one move."""
    kind = step.kind
    if kind in R_MOVES:
        return 0, 0
    if kind in ("birth", "death"):
        return 0, 1
    if kind in ("star", "dot"):
        return 0, -2
    a, b = step.before, step.after
    h = a.n_minus - b.n_minus
    q = (b.n_plus - 2 * b.n_minus) - (a.n_plus - 2 * a.n_minus)
    if kind == "saddle":
        return h, q - 1
    if kind == "reorient":
        return h, q
    raise MoveError(f"no chain map rule for {kind}")


def elementary_chain_map(
    step: Step, source: KhComplex, target: KhComplex, log: logging.Logger | None = None
) -> ChainMap:
    """Chain map C(step.before) -> C(step.after) of one move (minus flavor)."""
    log = log or logger
    kind = step.kind
    if kind in R_MOVES:
        matrix = reidemeister_matrix(step, source, target, log)
    elif kind == "saddle":
        matrix = _vertexwise(step, source, target, _saddle_columns)
    elif kind == "birth":
        matrix = _vertexwise(step, source, target, _birth_columns)
    elif kind == "death":
        matrix = _vertexwise(step, source, target, _death_columns)
    elif kind in ("star", "dot"):
        matrix = _vertexwise(step, source, target, _decoration_columns)
    elif kind == "reorient":
        matrix = _vertexwise(step, source, target, _identity_columns)
    else:
        raise MoveError(f"no chain map rule for {kind}")
    shift = declared_shift(step)
    matrix.shift = shift
    f = ChainMap(source, target, matrix, shift, step.move.text())
    if not f.is_graded():
        raise GradingError(f"{kind} map does not shift gradings by {shift}")
    return f


def movie_complexes(movie: Movie, table: FrobeniusTable | None = None, jobs: int = 1) -> list[KhComplex]:
    table = table or movie.table()
    return pooled(lambda frame: build_complex(frame, table, "minus"), movie.frames, jobs)


def movie_maps(
    movie: Movie,
    complexes: list[KhComplex] | None = None,
    log: logging.Logger | None = None,
    jobs: int = 1,
) -> list[ChainMap]:
    log = log or logger
    complexes = complexes or movie_complexes(movie, jobs=jobs)
    steps = movie.steps
    return pooled(lambda k: _step_map(steps[k], complexes[k], complexes[k + 1], k, log), range(len(steps)), jobs)


def compose_movie(movie: Movie, log: logging.Logger | None = None, jobs: int = 1) -> ChainMap:
    """The composite chain map C(first frame) -> C(last frame)."""
    log = log or logger
    complexes = movie_complexes(movie, jobs=jobs)
    f = identity_map(complexes[0])
    for g in movie_maps(movie, complexes, log, jobs):
        f = f.then(g)
    f.label = movie.name or f.label
    log.info(
        "composed %d moves: %d -> %d generators, shift %s",
        len(movie),
        len(complexes[0]),
        len(complexes[-1]),
        f.shift,
    )
    return f


def push_chain(maps: Sequence[ChainMap], x: Chain, hat: bool = False) -> Chain:
    """Apply the maps one after another; ``hat`` keeps only U^0 terms after each."""
    for f in maps:
        x = f.apply(x)
        if hat:
            x = {i: w for i, v in x.items() if (w := v.truncate(below=1))}
    return x


class MovieCache:
    """Frame complexes and elementary maps keyed by the PD text of the frames.

    Slices of one movie and movies sharing frames reuse each other's
    complexes and maps.
    """

    def __init__(self, logger: logging.Logger, jobs: int = 1):
        self.logger = logger
        self.jobs = jobs
        self.tables: dict[tuple[str, str], FrobeniusTable] = {}
        self.complexes: dict[tuple, KhComplex] = {}
        self.maps: dict[tuple, ChainMap] = {}

    def table(self, movie: Movie) -> FrobeniusTable:
        key = (movie.theory.value, movie.field_spec)
        if key not in self.tables:
            self.tables[key] = movie.table()
        return self.tables[key]

    def complex(self, d: PlanarDiagram, table: FrobeniusTable) -> KhComplex:
        key = (id(table), emit_pd(d))
        c = self.complexes.get(key)
        if c is None:
            c = self.complexes[key] = build_complex(d, table, "minus", self.logger)
        return c

    def movie(self, movie: Movie) -> tuple[list[KhComplex], list[ChainMap]]:
        table = self.table(movie)
        complexes = pooled(lambda d: self.complex(d, table), movie.frames, self.jobs)
        steps = movie.steps
        keys = [
            (id(table), emit_pd(s.before), emit_pd(s.after), s.move.text()) for s in steps
        ]
        todo = [k for k in range(len(steps)) if keys[k] not in self.maps]
        fresh = pooled(
            lambda k: _step_map(steps[k], complexes[k], complexes[k + 1], k, self.logger), todo, self.jobs
        )
        for k, f in zip(todo, fresh):
            self.maps[keys[k]] = f
        self.logger.debug("movie cache: %d of %d maps reused", len(steps) - len(todo), len(steps))
        return complexes, [self.maps[key] for key in keys]


def compose(maps: Iterable[ChainMap]) -> ChainMap:
    maps = list(maps)
    if not maps:
        raise MoveError("nothing to compose")
    f = maps[0]
    for g in maps[1:]:
        f = f.then(g)
    return f


# ----------------------- Vertexwise maps -----------------------


def _vertexwise(step: Step, source: KhComplex, target: KhComplex, rule) -> SparseUMatrix:
    """Columns for moves that keep the crossings: each cube vertex maps to itself."""
    if source.diagram.crossing_ids != target.diagram.crossing_ids:
        raise MoveError(f"{step.kind} changed the crossings")
    columns = []
    for g in source.generators:
        src = source.resolutions[g.vertex]
        dst = target.resolutions[g.vertex]
        image: Chain = {}
        for labels, coef in rule(step, source.table, src, dst, g.labels):
            chain_iadd(image, target.find(g.vertex, labels), coef)
        columns.append(image)
    return SparseUMatrix.from_columns(len(target), columns)


def _carried(src: Resolution, dst: Resolution, skip: set[int], after: PlanarDiagram) -> dict[int, int]:
    """Source circles away from the move, sent to the target circles through a surviving arc."""
    out = {}
    for c, circle in enumerate(src.circles):
        if c in skip:
            continue
        arc = next((a for a in circle if a in after.arcs), None)
        if arc is None:
            raise MoveError(f"circle {circle} has no surviving arc")
        out[c] = dst.circle_of[arc]
    return out


def _saddle_columns(step: Step, table, src, dst, labels):
    p = step.touched_before[0]
    q = step.touched_before[-1]
    joined = (src.circle_of[p], src.circle_of[q])
    parted = (dst.circle_of[step.touched_after[0]], dst.circle_of[step.touched_after[-1]])
    if joined[0] == joined[1] and parted[0] == parted[1]:
        raise MoveError("saddle neither merges nor splits a circle")
    circle_map = _carried(src, dst, set(joined), step.after)
    return saddle_image(table, src, dst, circle_map, joined, parted, labels)


def _birth_columns(step: Step, table, src, dst, labels):
    new = dst.circle_of[step.touched_after[0]]
    out = [None] * len(dst)
    for c, t in _carried(src, dst, set(), step.after).items():
        out[t] = labels[c]
    out[new] = ONE
    return [(tuple(out), table.poly(1))]


def _death_columns(step: Step, table, src, dst, labels):
    gone = src.circle_of[step.touched_before[0]]
    out = [None] * len(dst)
    for c, t in _carried(src, dst, {gone}, step.after).items():
        out[t] = labels[c]
    value = table.counit(table.basis(labels[gone]))
    return [(tuple(out), value)] if value else []


def _decoration_columns(step: Step, table, src, dst, labels):
    c = src.circle_of[step.touched_before[0]]
    op = table.star_op if step.kind == "star" else table.dot_op
    image = op(table.basis(labels[c]))
    return [(labels[:c] + (lab,) + labels[c + 1:], coef) for lab, coef in image.coeffs.items()]


def _identity_columns(step: Step, table, src, dst, labels):
    return [(labels, table.poly(1))]


def _step_map(step: Step, source: KhComplex, target: KhComplex, k: int, log: logging.Logger) -> ChainMap:
    try:
        return elementary_chain_map(step, source, target, log)
    except MoveError as exc:
        if exc.frame is None:
            raise MoveError(str(exc), k, step.move.text()) from exc
        raise
