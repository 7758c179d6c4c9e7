"""Planar link diagrams with a rotation system, faces and per-component orientations.

Conventions
-----------
A crossing ``X(a,b,c,d;o)`` lists the arcs at its four slots counterclockwise,
starting at the incoming under-strand; the under-strand runs slot 0 -> slot 2.
``o = +1`` means the over-strand runs slot 3 -> slot 1 in the reference
direction of the arcs, ``o = -1`` means slot 1 -> slot 3. Every arc has a
reference direction (tail slot -> head slot); ``flip[arc]`` records whether the
actual orientation of its component is reversed against it. Stored diagrams
are canonical: reference directions follow the orientation and every flip is
zero, so two diagrams with the same ids are equal exactly when they agree as
oriented diagrams.

A dart ``(arc, "l")`` is the left side of an arc walked along its reference
direction and ``(arc, "r")`` its right side. Faces are walked with the face on
the left: arriving at slot ``s`` of a crossing, the walk leaves by slot
``s - 1``. Corner ``i`` of a crossing is the sector between slots ``i`` and
``i + 1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable

import networkx as nx
from networkx.utils import UnionFind

from khmix.core.errors import DiagramError

logger = logging.getLogger("khmix.linkdiag")

Dart = tuple[int, str]
Slot = tuple[int, int]

OTHER_SIDE = {"l": "r", "r": "l"}


@dataclass(frozen=True)
class Crossing:
    arcs: tuple[int, int, int, int]
    o: int

    @property
    def over_in(self) -> int:
        return 3 if self.o == 1 else 1

    @property
    def over_out(self) -> int:
        return 1 if self.o == 1 else 3

    def is_head_slot(self, slot: int) -> bool:
        return slot == 0 or slot == self.over_in

    def is_over_slot(self, slot: int) -> bool:
        return slot in (1, 3)

    def mirrored(self) -> "Crossing":
        a, b, c, d = self.arcs
        if self.o == 1:
            return Crossing((d, a, b, c), -1)
        return Crossing((b, c, d, a), 1)

    def token(self) -> str:
        a, b, c, d = self.arcs
        return f"X({a},{b},{c},{d};{'+' if self.o == 1 else '-'})"


@dataclass(frozen=True)
class PlanarDiagram:
    crossings: dict[int, Crossing]
    loops: frozenset[int]
    flip: dict[int, int]
    face_of: dict[Dart, int]
    faces: frozenset[int]
    outer: int
    next_arc: int = 0
    next_crossing: int = 0
    next_face: int = 0

    # ----------------------- Arc structure -----------------------

    @cached_property
    def ends(self) -> tuple[dict[int, Slot], dict[int, Slot]]:
        heads: dict[int, Slot] = {}
        tails: dict[int, Slot] = {}
        for cid, x in self.crossings.items():
            for slot, arc in enumerate(x.arcs):
                target = heads if x.is_head_slot(slot) else tails
                if arc in target:
                    raise DiagramError(f"inconsistent orientation on arc {arc}")
                target[arc] = (cid, slot)
        return heads, tails

    @property
    def heads(self) -> dict[int, Slot]:
        return self.ends[0]

    @property
    def tails(self) -> dict[int, Slot]:
        return self.ends[1]

    @cached_property
    def arcs(self) -> tuple[int, ...]:
        found = set(self.loops)
        for x in self.crossings.values():
            found.update(x.arcs)
        return tuple(sorted(found))

    @cached_property
    def crossing_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.crossings))

    def arc_at(self, slot: Slot) -> int:
        cid, s = slot
        return self.crossings[cid].arcs[s % 4]

    def next_arc_along(self, arc: int) -> int:
        """The arc following ``arc`` in its reference direction."""
        if arc in self.loops:
            return arc
        cid, s = self.heads[arc]
        return self.crossings[cid].arcs[(s + 2) % 4]

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        seen: set[int] = set()
        comps = []
        for start in self.arcs:
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self.next_arc_along(start)
            while nxt != start:
                if nxt in seen:
                    raise DiagramError(f"arc {nxt} reached twice while tracing from {start}")
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.next_arc_along(nxt)
            comps.append(tuple(cycle))
        return tuple(sorted(comps, key=min))

    @cached_property
    def component_of(self) -> dict[int, int]:
        return {arc: min(comp) for comp in self.components for arc in comp}

    @property
    def component_ids(self) -> tuple[int, ...]:
        return tuple(min(c) for c in self.components)

    def component_arcs(self, cid: int) -> tuple[int, ...]:
        for comp in self.components:
            if min(comp) == cid:
                return comp
        raise DiagramError(f"no component {cid}")

    # ----------------------- Orientation and signs -----------------------

    def component_flip(self, cid: int) -> int:
        return self.flip.get(cid, 0)

    def sign(self, cid: int, reversed_components: frozenset[int] = frozenset()) -> int:
        x = self.crossings[cid]
        under, over = x.arcs[0], x.arcs[1]
        parity = self.flip.get(under, 0) ^ self.flip.get(over, 0)
        parity ^= (self.component_of[under] in reversed_components) ^ (
            self.component_of[over] in reversed_components
        )
        return -x.o if parity else x.o

    @cached_property
    def signs(self) -> dict[int, int]:
        return {cid: self.sign(cid) for cid in self.crossings}

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs.values() if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs.values() if s < 0)

    def writhe(self) -> int:
        return self.n_plus - self.n_minus

    def linking_number(self, sub: Iterable[int]) -> int:
        """lk(sub, rest) for a set of component ids."""
        sub = set(sub)
        total = 0
        for cid, x in self.crossings.items():
            a = self.component_of[x.arcs[0]] in sub
            b = self.component_of[x.arcs[1]] in sub
            if a != b:
                total += self.signs[cid]
        if total % 2:
            raise DiagramError("odd inter-component crossing count")
        return total // 2

    # ----------------------- Faces -----------------------

    def walk_next(self, dart: Dart) -> Dart:
        arc, side = dart
        if arc in self.loops:
            return dart
        cid, s = self.heads[arc] if side == "l" else self.tails[arc]
        x = self.crossings[cid]
        t = (s - 1) % 4
        nxt = x.arcs[t]
        if self.tails.get(nxt) == (cid, t):
            return (nxt, "l")
        return (nxt, "r")

    @cached_property
    def walks(self) -> tuple[tuple[Dart, ...], ...]:
        seen: set[Dart] = set()
        out = []
        for arc in self.arcs:
            for side in ("l", "r"):
                start = (arc, side)
                if start in seen:
                    continue
                walk = [start]
                seen.add(start)
                nxt = self.walk_next(start)
                while nxt != start:
                    walk.append(nxt)
                    seen.add(nxt)
                    nxt = self.walk_next(nxt)
                out.append(tuple(walk))
        return tuple(out)

    @cached_property
    def walk_of(self) -> dict[Dart, int]:
        return {d: i for i, w in enumerate(self.walks) for d in w}

    def corner_dart(self, cid: int, corner: int) -> Dart:
        """The dart whose face fills the given corner of a crossing."""
        slot = (corner + 1) % 4
        arc = self.crossings[cid].arcs[slot]
        return (arc, "l") if self.heads.get(arc) == (cid, slot) else (arc, "r")

    def corner_face(self, cid: int, corner: int) -> int:
        return self.face_of[self.corner_dart(cid, corner)]

    def face_darts(self, face: int) -> list[Dart]:
        return sorted(d for d, f in self.face_of.items() if f == face)

    def face_walks(self, face: int) -> list[tuple[Dart, ...]]:
        return [w for w in self.walks if self.face_of[w[0]] == face]

    def face_size(self, face: int) -> int:
        return sum(1 for f in self.face_of.values() if f == face)

    @cached_property
    def projection_components(self) -> list[set]:
        g = nx.Graph()
        for arc in self.loops:
            g.add_node(("loop", arc))
        for cid, x in self.crossings.items():
            g.add_node(("x", cid))
        for arc in self.arcs:
            if arc in self.loops:
                continue
            g.add_edge(("x", self.heads[arc][0]), ("x", self.tails[arc][0]))
        return [set(c) for c in nx.connected_components(g)]

    def dart_block(self, dart: Dart) -> int:
        """Index of the projection component carrying the dart's arc."""
        arc = dart[0]
        node = ("loop", arc) if arc in self.loops else ("x", self.heads[arc][0])
        for i, comp in enumerate(self.projection_components):
            if node in comp:
                return i
        raise DiagramError(f"arc {arc} not in any projection component")

    # ----------------------- Validation -----------------------

    def validate(self) -> None:
        heads, tails = self.heads, self.tails
        for arc in self.arcs:
            if arc in self.loops:
                if arc in heads or arc in tails:
                    raise DiagramError(f"loop {arc} also appears at a crossing")
                continue
            if arc not in heads or arc not in tails:
                raise DiagramError(f"dangling arc-end on arc {arc}")
        for comp in self.components:
            flips = {self.flip.get(a, 0) for a in comp}
            if len(flips) > 1:
                raise DiagramError(f"inconsistent orientation on component {min(comp)}")
        self._check_faces()

    def _check_faces(self) -> None:
        if not self.arcs:
            if self.faces != frozenset({self.outer}):
                raise DiagramError("empty diagram must have exactly its outer face")
            return
        for w in self.walks:
            labels = {self.face_of.get(d) for d in w}
            if None in labels or len(labels) != 1:
                raise DiagramError(f"walk through {w[0]} carries face labels {labels}")
        if set(self.face_of.values()) != set(self.faces) or self.outer not in self.faces:
            raise DiagramError("face set does not match the darts")
        blocks = self.projection_components
        per_block = [0] * len(blocks)
        for w in self.walks:
            per_block[self.dart_block(w[0])] += 1
        for comp, count in zip(blocks, per_block):
            n_cross = sum(1 for node in comp if node[0] == "x")
            if count != n_cross + 2:
                raise DiagramError("non-planar rotation data (Euler characteristic is not 2)")
        incidence = nx.MultiGraph()
        for f in self.faces:
            incidence.add_node(("f", f))
        for i in range(len(blocks)):
            incidence.add_node(("b", i))
        for w in self.walks:
            incidence.add_edge(("f", self.face_of[w[0]]), ("b", self.dart_block(w[0])))
        if not nx.is_tree(incidence):
            raise DiagramError("non-planar face assignment for a split diagram")

    # ----------------------- Derived diagrams -----------------------

    def mirror(self) -> "PlanarDiagram":
        return replace(self, crossings={cid: x.mirrored() for cid, x in self.crossings.items()})

    def reoriented(self, component_ids: Iterable[int]) -> "PlanarDiagram":
        comps = set(component_ids)
        flip = dict(self.flip)
        for arc in self.arcs:
            if self.component_of[arc] in comps:
                flip[arc] = flip.get(arc, 0) ^ 1
        return replace(self, flip=flip).canonical()

    def canonical(self) -> "PlanarDiagram":
        """Turn every reference direction to the actual orientation (all flips zero)."""
        rev = {a for a in self.arcs if self.flip.get(a, 0)}
        if not rev:
            return self
        crossings = {}
        for cid, x in self.crossings.items():
            under_rev = x.arcs[0] in rev
            over_rev = x.arcs[1] in rev
            arcs = x.arcs[2:] + x.arcs[:2] if under_rev else x.arcs
            crossings[cid] = Crossing(arcs, -x.o if under_rev != over_rev else x.o)
        face_of = {(a, OTHER_SIDE[s] if a in rev else s): f for (a, s), f in self.face_of.items()}
        return replace(self, crossings=crossings, flip={a: 0 for a in self.arcs}, face_of=face_of)

    def same_as(self, other: "PlanarDiagram") -> bool:
        return (
            self.crossings == other.crossings
            and self.loops == other.loops
            and {a: self.flip.get(a, 0) for a in self.arcs}
            == {a: other.flip.get(a, 0) for a in other.arcs}
            and self.face_of == other.face_of
            and self.outer == other.outer
        )

    def __repr__(self) -> str:
        return (
            f"PlanarDiagram({len(self.crossings)} crossings, {len(self.arcs)} arcs, "
            f"{len(self.components)} components, {len(self.faces)} faces)"
        )


def empty_diagram() -> PlanarDiagram:
    return PlanarDiagram({}, frozenset(), {}, {}, frozenset({0}), 0, 0, 0, 1)


def assemble(
    crossings: dict[int, Crossing],
    loops: Iterable[int],
    flip: dict[int, int],
    labels: dict[Dart, int],
    *,
    outer: int,
    next_arc: int,
    next_crossing: int,
    next_face: int,
    splits: Iterable[tuple[Dart, int]] = (),
    merges: Iterable[tuple[int, int]] = (),
) -> PlanarDiagram:
    """Build a diagram from crossings and inherited face labels.

    Every dart carries the id of the face it came from. Walks whose darts
    carry several labels merge those faces (smallest id survives); each
    ``(dart, face)`` in ``splits`` moves the dart's whole walk to that fresh
    face id; ``merges`` unions face labels explicitly.
    """
    loops = frozenset(loops)
    base = PlanarDiagram(
        crossings=dict(crossings),
        loops=loops,
        flip={},
        face_of={},
        faces=frozenset(),
        outer=outer,
        next_arc=next_arc,
        next_crossing=next_crossing,
        next_face=next_face,
    )
    flip = {arc: flip.get(arc, 0) for arc in base.arcs}
    labels = dict(labels)
    for dart, fresh in splits:
        walk = base.walks[base.walk_of[dart]]
        next_face = max(next_face, fresh + 1)
        for d in walk:
            labels[d] = fresh
    uf = UnionFind()
    for w in base.walks:
        missing = [d for d in w if d not in labels]
        if missing:
            raise DiagramError(f"no face label for dart {missing[0]}")
        first = labels[w[0]]
        uf[first]
        for d in w[1:]:
            uf.union(first, labels[d])
    for a, b in merges:
        uf.union(a, b)
    uf[outer]
    rep = {}
    for group in uf.to_sets():
        low = min(group)
        for lab in group:
            rep[lab] = low
    face_of = {d: rep[labels[d]] for w in base.walks for d in w}
    faces = frozenset(face_of.values()) or frozenset({rep[outer]})
    outer_face = rep[outer]
    if outer_face not in faces:
        raise DiagramError(f"outer face {outer} vanished")
    d = replace(
        base,
        flip=flip,
        face_of=face_of,
        faces=faces,
        outer=outer_face,
        next_face=next_face,
    ).canonical()
    d.validate()
    return d
