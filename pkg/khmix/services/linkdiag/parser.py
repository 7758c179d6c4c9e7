"""Text form of planar diagrams.

``diagram PD[X(a,b,c,d;o),...] loops[l,...] orient[c:+,...] outer[ref] split[darts|darts]``

A crossing may carry an explicit id as ``X7(...)``; without one, crossings are
numbered by position. Faces are numbered by their smallest dart, so face ids
are not part of the text: ``outer`` and ``split`` refer to faces through darts
``<arc>:<side>`` (a bare integer in ``outer`` is a face id).
"""

from __future__ import annotations

import re
from dataclasses import replace

from networkx.utils import UnionFind

from khmix.core.errors import DiagramError, ParseError
from khmix.services.linkdiag.diagram import Crossing, Dart, PlanarDiagram, empty_diagram

_WS = re.compile(r"\s*")
_INT = re.compile(r"-?\d+")
_CROSSING = re.compile(r"X(\d*)\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*;\s*([+-])\s*\)")
_DART = re.compile(r"(\d+):([lr])")


class _Scanner:
    def __init__(self, text: str, line: int):
        self.text = text
        self.pos = 0
        self.line = line

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.pos + 1)

    def skip(self) -> None:
        self.pos = _WS.match(self.text, self.pos).end()

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek_word(self, word: str) -> bool:
        self.skip()
        return self.text.startswith(word, self.pos)

    def expect(self, literal: str) -> None:
        self.skip()
        if not self.text.startswith(literal, self.pos):
            raise self.error(f"expected {literal!r}")
        self.pos += len(literal)

    def accept(self, literal: str) -> bool:
        if self.peek_word(literal):
            self.pos += len(literal)
            return True
        return False

    def match(self, pattern: re.Pattern, what: str) -> re.Match:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m

    def integer(self) -> int:
        return int(self.match(_INT, "an integer").group())

    def int_list(self) -> list[int]:
        out: list[int] = []
        if self.accept("]"):
            return out
        while True:
            out.append(self.integer())
            if self.accept("]"):
                return out
            self.expect(",")


# ----------------------- Public API -----------------------


def parse_dart(text: str) -> Dart:
    m = _DART.fullmatch(text.strip())
    if not m:
        raise ParseError(f"bad arc side {text!r} (expected <arc>:l or <arc>:r)")
    return int(m.group(1)), m.group(2)


def face_ref(d: PlanarDiagram, text: str) -> int:
    """Resolve a face reference (face id or ``<arc>:<side>``)."""
    text = text.strip()
    if ":" in text:
        dart = parse_dart(text)
        if dart not in d.face_of:
            raise DiagramError(f"no arc {dart[0]} in the diagram")
        return d.face_of[dart]
    face = int(text)
    if face not in d.faces:
        raise DiagramError(f"no face {face} in the diagram")
    return face


def dart_ref(d: PlanarDiagram, face: int) -> str:
    """The canonical ``<arc>:<side>`` reference of a face (its smallest dart)."""
    darts = d.face_darts(face)
    if not darts:
        return str(face)
    arc, side = darts[0]
    return f"{arc}:{side}"


def parse_pd(text: str, line: int = 1) -> PlanarDiagram:
    """Parse one diagram line, validating planarity and orientations."""
    sc = _Scanner(text, line)
    sc.accept("diagram")
    sc.expect("PD[")
    crossings: dict[int, Crossing] = {}
    if not sc.accept("]"):
        while True:
            start = sc.pos
            m = sc.match(_CROSSING, "a crossing X(a,b,c,d;o)")
            cid = int(m.group(1)) if m.group(1) else len(crossings)
            if cid in crossings:
                sc.pos = start
                raise sc.error(f"duplicate crossing id {cid}")
            arcs = tuple(int(m.group(i)) for i in range(2, 6))
            crossings[cid] = Crossing(arcs, 1 if m.group(6) == "+" else -1)
            if sc.accept("]"):
                break
            sc.expect(",")
    loops: list[int] = []
    orient: dict[int, int] = {}
    outer_text: str | None = None
    groups: list[list[Dart]] | None = None
    if sc.accept("loops["):
        loops = sc.int_list()
    if sc.accept("orient["):
        if not sc.accept("]"):
            while True:
                comp = sc.integer()
                sc.expect(":")
                if sc.accept("+"):
                    orient[comp] = 0
                elif sc.accept("-"):
                    orient[comp] = 1
                else:
                    raise sc.error("expected + or -")
                if sc.accept("]"):
                    break
                sc.expect(",")
    if sc.accept("outer["):
        sc.skip()
        end = sc.text.find("]", sc.pos)
        if end < 0:
            raise sc.error("unterminated outer[")
        outer_text = sc.text[sc.pos:end].strip()
        sc.pos = end + 1
    if sc.accept("split["):
        groups = [[]]
        while not sc.accept("]"):
            m = sc.match(_DART, "an arc side <arc>:l|r")
            groups[-1].append((int(m.group(1)), m.group(2)))
            if sc.accept("|"):
                groups.append([])
            else:
                sc.accept(",")
    if not sc.at_end():
        raise sc.error("unexpected trailing text")
    try:
        return build_diagram(crossings, loops, orient, outer_text, groups)
    except ParseError:
        raise
    except DiagramError as exc:
        raise DiagramError(f"line {line}: {exc}") from exc


def build_diagram(
    crossings: dict[int, Crossing],
    loops: list[int],
    orient: dict[int, int],
    outer_text: str | None = None,
    groups: list[list[Dart]] | None = None,
) -> PlanarDiagram:
    if not crossings and not loops:
        return empty_diagram()
    arcs_seen: dict[int, int] = {}
    for x in crossings.values():
        for a in x.arcs:
            arcs_seen[a] = arcs_seen.get(a, 0) + 1
    for a, n in sorted(arcs_seen.items()):
        if n != 2:
            raise DiagramError(f"dangling arc-end on arc {a}")
    for a in loops:
        if a in arcs_seen:
            raise DiagramError(f"loop {a} also appears at a crossing")
    base = PlanarDiagram(crossings, frozenset(loops), {}, {}, frozenset(), 0)
    base.ends  # raises on inconsistent orientation
    flip = {}
    for key in orient:
        if base.component_of.get(key) != key:
            raise DiagramError(f"orient names unknown component {key}")
    for comp in base.components:
        cid = min(comp)
        for a in comp:
            flip[a] = orient.get(cid, 0)
    walk_groups = _group_walks(base, groups)
    face_of: dict[Dart, int] = {}
    ordered = sorted(walk_groups, key=lambda g: min(min(base.walks[w]) for w in g))
    for fid, group in enumerate(ordered):
        for w in group:
            for dart in base.walks[w]:
                face_of[dart] = fid
    d = PlanarDiagram(
        crossings=crossings,
        loops=frozenset(loops),
        flip=flip,
        face_of=face_of,
        faces=frozenset(range(len(ordered))),
        outer=0,
        next_arc=max(base.arcs) + 1,
        next_crossing=max(crossings, default=-1) + 1,
        next_face=len(ordered),
    )
    if outer_text is None:
        outer = _default_outer(d)
    else:
        outer = face_ref(d, outer_text)
    d = _numbered_by_darts(replace(d, outer=outer).canonical())
    d.validate()
    return d


def emit_pd(d: PlanarDiagram) -> str:
    """Canonical text of a diagram; ``parse_pd(emit_pd(d))`` rebuilds it."""
    ids = d.crossing_ids
    explicit = ids != tuple(range(len(ids)))
    items = []
    for cid in ids:
        tok = d.crossings[cid].token()
        items.append(f"X{cid}{tok[1:]}" if explicit else tok)
    parts = [f"PD[{','.join(items)}]"]
    parts.append(f"loops[{','.join(str(a) for a in sorted(d.loops))}]")
    orient = ",".join(
        f"{cid}:{'-' if d.flip.get(cid, 0) else '+'}" for cid in d.component_ids
    )
    parts.append(f"orient[{orient}]")
    if not d.arcs:
        return " ".join(parts)
    default_groups = _group_walks(d, None)
    actual = {}
    for i, w in enumerate(d.walks):
        actual.setdefault(d.face_of[w[0]], []).append(i)
    same = sorted(sorted(g) for g in default_groups) == sorted(sorted(g) for g in actual.values())
    if not same:
        multi = [g for g in actual.values() if len(g) > 1]
        text = "|".join(",".join(_dart_text(min(d.walks[w])) for w in sorted(g)) for g in multi)
        parts.append(f"split[{text}]")
    if _default_outer(d) != d.outer:
        parts.append(f"outer[{dart_ref(d, d.outer)}]")
    return " ".join(parts)


# ----------------------- Internal helpers -----------------------


def _dart_text(dart: Dart) -> str:
    return f"{dart[0]}:{dart[1]}"


def _numbered_by_darts(d: PlanarDiagram) -> PlanarDiagram:
    """Renumber faces by their smallest dart once reversed components have swapped sides."""
    order = sorted(d.faces, key=lambda f: min(d.face_darts(f)))
    new = {f: i for i, f in enumerate(order)}
    if all(f == i for f, i in new.items()):
        return d
    face_of = {dart: new[f] for dart, f in d.face_of.items()}
    return replace(d, face_of=face_of, outer=new[d.outer])


def _group_walks(base: PlanarDiagram, groups: list[list[Dart]] | None) -> list[list[int]]:
    """Partition walk indices into faces.

    Default: every walk is its own face, except that split projection
    components sit side by side, so their largest walks share one face.
    """
    walks = base.walks
    if groups is not None:
        uf = UnionFind(range(len(walks)))
        for group in groups:
            idx = []
            for dart in group:
                if dart not in base.walk_of:
                    raise DiagramError(f"split refers to unknown arc side {_dart_text(dart)}")
                idx.append(base.walk_of[dart])
            uf.union(*idx)
        return [sorted(g) for g in uf.to_sets()]
    blocks = base.projection_components
    if len(blocks) <= 1:
        return [[i] for i in range(len(walks))]
    per_block: dict[int, list[int]] = {}
    for i, w in enumerate(walks):
        per_block.setdefault(base.dart_block(w[0]), []).append(i)
    shared = []
    out_groups = []
    for members in per_block.values():
        best = _largest_walk(walks, members)
        shared.append(best)
        out_groups.extend([i] for i in members if i != best)
    out_groups.append(shared)
    return out_groups


def _largest_walk(walks, members: list[int]) -> int:
    return min(members, key=lambda i: (-len(walks[i]), min(walks[i])))


def _default_outer(d: PlanarDiagram) -> int:
    if len(d.projection_components) > 1:
        counts = {}
        for w in d.walks:
            counts.setdefault(d.face_of[w[0]], set()).add(d.dart_block(w[0]))
        for face in sorted(d.faces, key=lambda f: min(d.face_darts(f))):
            if len(counts.get(face, ())) > 1:
                return face
    return min(d.faces, key=lambda f: (-d.face_size(f), min(d.face_darts(f))))
