"""The line-oriented movie language.

::

    # description (leading comment lines)
    theory lee|bn
    field q|f<p>
    diagram PD[...] loops[...] orient[...]
    reversed
      move ...            # moves leading from the diagram back to the true start
    end
    move <kind> key=value ... [ids=n,...]
    cut

A ``reversed`` block must directly follow the ``diagram`` line; the movie then
starts at the end of the block and first runs the block backwards.
"""

from __future__ import annotations

import logging
from pathlib import Path

from khmix.core.config import settings
from khmix.core.errors import CutError, ParseError
from khmix.services.frobenius.algebra import Theory
from khmix.services.frobenius.scalars import parse_field
from khmix.services.linkdiag.diagram import PlanarDiagram
from khmix.services.linkdiag.parser import dart_ref, emit_pd, face_ref, parse_pd
from khmix.services.movie.algebra import inverse_move
from khmix.services.movie.movie import Movie, replay
from khmix.services.movie.moves import Move

logger = logging.getLogger("khmix.movie")

FACE_PARAMS = {"r2_add": "face", "r3": "face", "birth": "face"}


# ----------------------- Public API -----------------------


def parse_movie(text: str, name: str = "") -> Movie:
    description: list[str] = []
    theory = Theory.parse(settings.theory)
    field_spec = settings.field
    start: PlanarDiagram | None = None
    prefix: list[Move] | None = None
    in_block = False
    moves: list[Move] = []
    cut: int | None = None
    seen_content = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if not seen_content:
                description.append(line.lstrip("#").strip())
            continue
        seen_content = True
        line = line.split("#", 1)[0].strip()
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "theory":
            theory = Theory.parse(rest)
        elif word == "field":
            parse_field(rest)
            field_spec = rest.lower()
        elif word == "diagram":
            if start is not None:
                raise ParseError("a movie has exactly one diagram line", lineno)
            start = parse_pd(line, lineno)
        elif word == "reversed":
            if start is None or moves or prefix is not None or cut is not None:
                raise ParseError("a reversed block must follow the diagram line", lineno)
            prefix = []
            in_block = True
        elif word == "end":
            if not in_block:
                raise ParseError("end without a reversed block", lineno)
            in_block = False
        elif word == "move":
            if start is None:
                raise ParseError("move before the diagram line", lineno)
            move = parse_move_line(rest, lineno)
            (prefix if in_block else moves).append(move)
        elif word == "cut":
            if in_block:
                raise ParseError("cut inside a reversed block", lineno)
            if cut is not None:
                raise CutError(f"line {lineno}: a movie has at most one cut marker")
            cut = len(moves)
        else:
            raise ParseError(f"unknown directive {word!r}", lineno)
    if start is None:
        raise ParseError("movie has no diagram line")
    if in_block:
        raise ParseError("unterminated reversed block")
    if prefix:
        steps = replay(start, prefix)
        undo = [inverse_move(s) for s in reversed(steps)]
        start = steps[-1].after
        moves = undo + moves
        cut = None if cut is None else cut + len(undo)
    movie = Movie(
        start=start,
        moves=tuple(moves),
        theory=theory,
        field_spec=field_spec,
        cut=cut,
        description=" ".join(description),
        name=name,
    )
    movie.steps  # replay now so inapplicable moves surface at parse time
    logger.debug("parsed movie %s: %d moves", name or "<text>", len(movie))
    return movie


def load_movie(path: Path | str) -> Movie:
    path = Path(path)
    return parse_movie(path.read_text(encoding="utf-8"), name=path.stem)


def parse_move_line(text: str, lineno: int = 0) -> Move:
    """``<kind> key=value ... [ids=...]`` (the text after ``move``)."""
    tokens = text.split()
    if not tokens:
        raise ParseError("move needs a kind", lineno)
    kind, params, ids = tokens[0], {}, []
    for tok in tokens[1:]:
        key, eq, value = tok.partition("=")
        if not eq or not value:
            raise ParseError(f"bad move parameter {tok!r} (expected key=value)", lineno)
        if key == "ids":
            for part in value.split(","):
                if part == "_":
                    ids.append(None)
                elif part.isdigit():
                    ids.append(int(part))
                else:
                    raise ParseError(f"bad id {part!r} in ids=", lineno)
            continue
        if key in params:
            raise ParseError(f"repeated parameter {key!r}", lineno)
        params[key] = value
    try:
        return Move.make(kind, ids=ids, **params)
    except ParseError as exc:
        raise ParseError(str(exc), lineno) from None


def emit_movie(movie: Movie) -> str:
    """Canonical text of a movie; every allocated arc and crossing id is written out."""
    lines = []
    if movie.description:
        lines.append(f"# {movie.description}")
    lines.append(f"theory {movie.theory.value}")
    lines.append(f"field {movie.field_spec}")
    lines.append(f"diagram {emit_pd(movie.start)}")
    for k, step in enumerate(movie.steps):
        if movie.cut == k:
            lines.append("cut")
        lines.append(portable_text(step.before, step.portable()))
    if movie.cut == len(movie):
        lines.append("cut")
    return "\n".join(lines) + "\n"


def portable_text(d: PlanarDiagram, move: Move) -> str:
    """Move text with face parameters written as arc sides of ``d``."""
    key = FACE_PARAMS.get(move.kind)
    if key is None:
        return move.text()
    face = face_ref(d, move.get(key))
    params = tuple((k, dart_ref(d, face) if k == key else v) for k, v in move.params)
    return Move(move.kind, params, move.ids).text()
