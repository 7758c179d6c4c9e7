"""Elementary moves on planar diagrams.

Every move is applied by rebuilding the diagram from a *geometric* description:
each crossing is four arcs in counterclockwise order plus the index pair of
its under-strand, and each arc carries a preferred direction (the crossing
end it should arrive at), whether its actual orientation agrees with that
direction, and its two face labels relative to it. ``_Rebuild.build`` then
orients each component as its smallest arc says, makes that orientation the
reference direction of every arc on it, rotates every crossing so that slot 0
is the incoming under-strand, and lets ``assemble`` recompute the faces.

Untouched components keep their reference direction, so crossings away from
a move are reproduced verbatim. New ids are allocated from the diagram's
counters in a fixed order per move unless the move carries ``ids=``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from khmix.core.errors import DiagramError, MoveError, ParseError
from khmix.services.linkdiag.diagram import (
    OTHER_SIDE,
    Crossing,
    Dart,
    PlanarDiagram,
    Slot,
    assemble,
)
from khmix.services.linkdiag.parser import face_ref, parse_dart

logger = logging.getLogger("khmix.movie")

MOVE_KINDS = (
    "r1_add",
    "r1_del",
    "r2_add",
    "r2_del",
    "r3",
    "birth",
    "death",
    "saddle",
    "star",
    "dot",
    "reorient",
)
REIDEMEISTER = ("r1_add", "r1_del", "r2_add", "r2_del", "r3")

_PARAMS = {
    "r1_add": ("arc", "side", "twist"),
    "r1_del": ("crossing", "arc"),
    "r2_add": ("arc1", "arc2", "face", "over"),
    "r2_del": ("crossing1", "crossing2"),
    "r3": ("face",),
    "birth": ("face", "inner", "orient", "outer"),
    "death": ("component",),
    "saddle": ("end1", "end2", "reverse"),
    "star": ("arc",),
    "dot": ("arc",),
    "reorient": ("component",),
}
_OPTIONAL = {
    ("r1_del", "arc"),
    ("birth", "inner"),
    ("birth", "orient"),
    ("birth", "outer"),
    ("saddle", "reverse"),
}


@dataclass(frozen=True)
class Move:
    kind: str
    params: tuple[tuple[str, str], ...] = ()
    ids: tuple[int | None, ...] = ()

    @classmethod
    def make(cls, kind: str, ids: Iterable[int | None] = (), **params) -> "Move":
        if kind not in MOVE_KINDS:
            raise ParseError(f"unknown move kind {kind!r}")
        allowed = _PARAMS[kind]
        for key in params:
            if key not in allowed:
                raise ParseError(f"move {kind} has no parameter {key!r}")
        for key in allowed:
            if key not in params and (kind, key) not in _OPTIONAL:
                raise ParseError(f"move {kind} needs {key}=")
        ordered = tuple((k, str(params[k])) for k in allowed if k in params)
        return cls(kind, ordered, tuple(None if i is None else int(i) for i in ids))

    def get(self, key: str, default: str | None = None) -> str | None:
        for k, v in self.params:
            if k == key:
                return v
        return default

    def with_ids(self, ids: Sequence[int | None]) -> "Move":
        return Move(self.kind, self.params, tuple(ids))

    def text(self) -> str:
        parts = ["move", self.kind]
        parts.extend(f"{k}={v}" for k, v in self.params)
        if self.ids:
            parts.append("ids=" + ",".join("_" if i is None else str(i) for i in self.ids))
        return " ".join(parts)

    def __str__(self) -> str:
        return self.text()


@dataclass
class Step:
    """One applied move: the two frames plus the bookkeeping chain maps need.

    ``links`` lists ``(arc_before, arc_after, same_direction)`` for every
    segment of a frame-``before`` arc that survives inside a frame-``after``
    arc; ``same_direction`` compares the two reference directions there.
    ``local_*`` are the crossings a Reidemeister move removes/creates,
    ``interior_*`` the arcs that lie entirely inside the move's disk,
    ``touched_*`` the arcs at a saddle's band (or carrying a star/dot),
    and ``ends_*`` the six boundary slots of an R3 disk.
    """

    move: Move
    before: PlanarDiagram
    after: PlanarDiagram
    allocated: tuple[int, ...] = ()
    kinds: tuple[str, ...] = ()
    links: tuple[tuple[int, int, bool], ...] = ()
    local_before: tuple[int, ...] = ()
    local_after: tuple[int, ...] = ()
    interior_before: tuple[int, ...] = ()
    interior_after: tuple[int, ...] = ()
    touched_before: tuple[int, ...] = ()
    touched_after: tuple[int, ...] = ()
    ends_before: tuple[Slot, ...] = ()
    ends_after: tuple[Slot, ...] = ()

    @property
    def kind(self) -> str:
        return self.move.kind

    def replayable(self) -> Move:
        """The move with the ids it actually allocated, so replays are exact."""
        return self.move.with_ids(self.allocated) if self.allocated else self.move

    def portable(self) -> Move:
        """Like ``replayable`` but leaves face ids open; face ids are renumbered on parse."""
        if not self.allocated:
            return self.move
        ids = [None if k == "face" else i for i, k in zip(self.allocated, self.kinds)]
        return self.move.with_ids(ids)


# ----------------------- Public API -----------------------


def apply_move(d: PlanarDiagram, move: Move, frame: int | None = None) -> Step:
    """Apply one move to ``d``; raise ``MoveError`` when it is not applicable."""
    handler = _HANDLERS.get(move.kind)
    if handler is None:
        raise MoveError(f"unknown move kind {move.kind!r}", frame, move.text())
    try:
        step = handler(d, move)
    except MoveError as exc:
        if exc.frame is None:
            raise MoveError(str(exc), frame, move.text()) from exc
        raise
    except (DiagramError, ParseError, KeyError, ValueError) as exc:
        raise MoveError(_reason(exc), frame, move.text()) from exc
    logger.debug("frame %s: %s -> %r", frame, move.text(), step.after)
    return step


def kink_candidates(d: PlanarDiagram, cid: int) -> list[int]:
    """Arcs forming an empty monogon at crossing ``cid`` (removable by r1_del).

    A monogon that is the outer face does not count: removing it would
    leave the outer face without a boundary walk.
    """
    x = d.crossings[cid]
    found = []
    for i in range(4):
        arc = x.arcs[i]
        if arc != x.arcs[(i + 1) % 4]:
            continue
        face = d.corner_face(cid, i)
        if face == d.outer:
            continue
        if d.face_size(face) == 1 and d.corner_dart(cid, i)[0] == arc:
            found.append(arc)
    return sorted(set(found))


def bigon_between(d: PlanarDiagram, c1: int, c2: int) -> tuple[int, int] | None:
    """The two arcs of a bigon face joining crossings ``c1`` and ``c2``."""
    for corner in range(4):
        face = d.corner_face(c1, corner)
        darts = d.face_darts(face)
        if len(darts) != 2:
            continue
        arcs = [a for a, _ in darts]
        if arcs[0] == arcs[1] or any(a in d.loops for a in arcs):
            continue
        if all({d.heads[a][0], d.tails[a][0]} == {c1, c2} for a in arcs):
            return arcs[0], arcs[1]
    return None


def r3_data(d: PlanarDiagram, face: int) -> dict:
    """Strand bookkeeping of a triangle face; raises unless it is an R3 triangle."""
    walks = d.face_walks(face)
    if len(walks) != 1 or len(walks[0]) != 3:
        raise MoveError(f"face {face} is not a triangle")
    darts = walks[0]
    if len({a for a, _ in darts}) != 3 or any(a in d.loops for a, _ in darts):
        raise MoveError(f"face {face} is not a triangle")
    arrivals = [d.heads[a] if s == "l" else d.tails[a] for a, s in darts]
    if len({cid for cid, _ in arrivals}) != 3:
        raise MoveError(f"face {face} is not a triangle")
    (y1, s1), (y2, s2), (y3, s3) = arrivals
    ends = (
        (y1, (s1 + 1) % 4),
        (y1, (s1 + 2) % 4),
        (y2, (s2 + 1) % 4),
        (y2, (s2 + 2) % 4),
        (y3, (s3 + 1) % 4),
        (y3, (s3 + 2) % 4),
    )
    a_over_b = (s1 + 1) % 2 == 1
    a_over_c = s2 % 2 == 1
    b_over_c = (s3 + 1) % 2 == 1
    counts = sorted(
        [
            a_over_b + a_over_c,
            (not a_over_b) + b_over_c,
            (not a_over_c) + (not b_over_c),
        ]
    )
    if counts != [0, 1, 2]:
        raise MoveError(f"triangle {face} is not an R3 configuration (cyclic over/under)")
    return {
        "darts": darts,
        "crossings": (y1, y2, y3),
        "ends": ends,
        "a_over_b": a_over_b,
        "a_over_c": a_over_c,
        "b_over_c": b_over_c,
        "corners": (
            d.corner_face(y1, (s1 + 1) % 4),
            d.corner_face(y2, (s2 + 1) % 4),
            d.corner_face(y3, (s3 + 1) % 4),
        ),
    }


# ----------------------- Rebuilding -----------------------


class _Rebuild:
    def __init__(self, d: PlanarDiagram, forced: Sequence[int] = ()):
        self.d = d
        self.geo: dict[int, list] = {cid: [list(x.arcs), 0] for cid, x in d.crossings.items()}
        self.loops = set(d.loops)
        heads = d.heads
        self.pref: dict[int, Slot | None] = {a: heads.get(a) for a in d.arcs}
        self.forward: dict[int, bool] = {a: not d.flip.get(a, 0) for a in d.arcs}
        self.sides: dict[int, tuple[int, int]] = {
            a: (d.face_of[(a, "l")], d.face_of[(a, "r")]) for a in d.arcs
        }
        self.splits: list[tuple[int, str, int]] = []
        self.merges: list[tuple[int, int]] = []
        self.extra_links: list[tuple[int, int, bool]] = []
        self.outer = d.outer
        self.next = {"arc": d.next_arc, "crossing": d.next_crossing, "face": d.next_face}
        self.taken = {
            "arc": set(d.arcs),
            "crossing": set(d.crossings),
            "face": set(d.faces),
        }
        self.forced = list(forced)
        self.allocated: list[int] = []
        self.kinds: list[str] = []
        self.start: dict[int, int] = {}
        self.reversed: set[int] = set()

    # id allocation
    def alloc(self, kind: str) -> int:
        forced = self.forced.pop(0) if self.forced else None
        if forced is not None:
            new = forced
            if new in self.taken[kind] or new < 0:
                raise MoveError(f"forced {kind} id {new} is already in use")
            self.next[kind] = max(self.next[kind], new + 1)
        else:
            new = self.next[kind]
            self.next[kind] += 1
        self.taken[kind].add(new)
        self.allocated.append(new)
        self.kinds.append(kind)
        return new

    # geometric edits
    def put(self, arc: int, pref: Slot | None, forward: bool, sides: tuple[int, int]) -> None:
        self.pref[arc] = pref
        self.forward[arc] = forward
        self.sides[arc] = sides

    def drop(self, arc: int) -> None:
        self.pref.pop(arc, None)
        self.forward.pop(arc, None)
        self.sides.pop(arc, None)
        self.loops.discard(arc)

    def replace_at(self, end: Slot, arc: int) -> None:
        cid, pos = end
        self.geo[cid][0][pos] = arc

    def split(self, arc: int, side: str, face: int) -> None:
        self.splits.append((arc, side, face))

    def link(self, old: int, new: int, same: bool = True) -> None:
        self.extra_links.append((old, new, same))

    def slot_of(self, end: Slot) -> Slot:
        cid, pos = end
        return cid, (pos - self.start[cid]) % 4

    def build(self) -> PlanarDiagram:
        ends: dict[int, list[Slot]] = {}
        for cid, (arcs, _) in self.geo.items():
            for pos, a in enumerate(arcs):
                ends.setdefault(a, []).append((cid, pos))
        for a, e in ends.items():
            if len(e) != 2:
                raise MoveError(f"arc {a} would have {len(e)} ends")
            if a in self.loops:
                raise MoveError(f"loop {a} would meet a crossing")
        arcs = sorted(set(ends) | self.loops)
        arrive: dict[int, Slot] = {}
        backwards: set[int] = set()
        seen: set[int] = set()
        for start in arcs:
            if start in seen:
                continue
            seen.add(start)
            if start in self.loops:
                if not self.forward[start]:
                    backwards.add(start)
                continue
            end = self.pref[start]
            if end not in ends[start]:
                raise MoveError(f"arc {start} has no end at {end}")
            if not self.forward[start]:
                end = next(e for e in ends[start] if e != end)
            a = start
            while True:
                seen.add(a)
                arrive[a] = end
                cid, pos = end
                out = (cid, (pos + 2) % 4)
                a = self.geo[cid][0][out[1]]
                if a == start:
                    break
                e = ends[a]
                end = e[1] if e[0] == out else e[0]
        self.reversed = {a for a in arrive if arrive[a] != self.pref.get(a)} | backwards
        crossings = {}
        for cid, (slots, under) in self.geo.items():
            s = under if arrive[slots[under]] == (cid, under) else under + 2
            rot = tuple(slots[(s + k) % 4] for k in range(4))
            over_in = (s + 3) % 4
            o = 1 if arrive[slots[over_in]] == (cid, over_in) else -1
            crossings[cid] = Crossing(rot, o)
            self.start[cid] = s % 4
        labels: dict[Dart, int] = {}
        for a in arcs:
            left, right = self.sides[a]
            if a in self.reversed:
                left, right = right, left
            labels[(a, "l")] = left
            labels[(a, "r")] = right
        splits = [
            ((a, OTHER_SIDE[side] if a in self.reversed else side), face)
            for a, side, face in self.splits
        ]
        return assemble(
            crossings,
            self.loops,
            {a: 0 for a in arcs},
            labels,
            outer=self.outer,
            next_arc=self.next["arc"],
            next_crossing=self.next["crossing"],
            next_face=self.next["face"],
            splits=splits,
            merges=self.merges,
        )

    def step(self, move: Move, after: PlanarDiagram, **extra) -> Step:
        links = [(a, a, a not in self.reversed) for a in self.d.arcs if a in after.arcs]
        for old, new, same in self.extra_links:
            links.append((old, new, same != (new in self.reversed)))
        return Step(
            move=move,
            before=self.d,
            after=after,
            allocated=tuple(self.allocated),
            kinds=tuple(self.kinds),
            links=tuple(links),
            **extra,
        )


# ----------------------- Move handlers -----------------------


def _r1_add(d: PlanarDiagram, m: Move) -> Step:
    arc = _arc(d, m, "arc")
    side = _choice(m, "side", ("l", "r"))
    twist = _choice(m, "twist", ("+", "-"))
    b = _Rebuild(d, m.ids)
    x = b.alloc("crossing")
    loop = b.alloc("arc")
    was_loop = arc in d.loops
    piece = arc if was_loop else b.alloc("arc")
    inner = b.alloc("face")
    left, right = b.sides[arc]
    forward = b.forward[arc]
    if was_loop:
        b.loops.discard(arc)
    else:
        head = d.heads[arc]
        b.replace_at(head, piece)
        b.put(piece, head, forward, (left, right))
        b.link(arc, piece)
    if side == "l":
        b.geo[x] = [[arc, piece, loop, loop], 0 if twist == "+" else 1]
        b.put(loop, (x, 3), forward, (inner, left))
    else:
        b.geo[x] = [[arc, loop, loop, piece], 1 if twist == "+" else 0]
        b.put(loop, (x, 1), forward, (right, inner))
    b.split(loop, side, inner)
    b.pref[arc] = (x, 0)
    b.link(arc, loop)
    after = b.build()
    return b.step(m, after, local_after=(x,), interior_after=(loop,))


def _r1_del(d: PlanarDiagram, m: Move) -> Step:
    x = _crossing(d, m, "crossing")
    cands = kink_candidates(d, x)
    if not cands:
        raise MoveError(f"crossing {x} is not a removable kink")
    if m.get("arc") is not None:
        loop = int(m.get("arc"))
        if loop not in cands:
            raise MoveError(f"arc {loop} is not a kink loop at crossing {x}")
    else:
        loop = max(cands)
    arcs = d.crossings[x].arcs
    rest = [pos for pos in range(4) if arcs[pos] != loop]
    u = next(arcs[p] for p in rest if d.heads.get(arcs[p]) == (x, p))
    w = next(arcs[p] for p in rest if d.tails.get(arcs[p]) == (x, p))
    b = _Rebuild(d, m.ids)
    del b.geo[x]
    b.drop(loop)
    b.link(loop, u)
    if u == w:
        b.loops.add(u)
        b.pref[u] = None
    else:
        head = d.heads[w]
        b.replace_at(head, u)
        b.pref[u] = head
        lw, rw = b.sides[w]
        lu, ru = b.sides[u]
        b.merges += [(lu, lw), (ru, rw)]
        b.drop(w)
        b.link(w, u)
    after = b.build()
    return b.step(m, after, local_before=(x,), interior_before=(loop,))


def _r2_add(d: PlanarDiagram, m: Move) -> Step:
    p = _arc(d, m, "arc1")
    q = _arc(d, m, "arc2")
    face = _face(d, m, "face")
    over = _choice(m, "over", ("1", "2"))
    if p == q:
        raise MoveError("r2_add needs two different arcs")
    sp = _side_on(d, p, face)
    sq = _side_on(d, q, face)
    same_walk = d.walk_of[(p, sp)] == d.walk_of[(q, sq)]
    b = _Rebuild(d, m.ids)
    p_mid = b.alloc("arc")
    p_last = p if p in d.loops else b.alloc("arc")
    q_mid = b.alloc("arc")
    q_last = q if q in d.loops else b.alloc("arc")
    alpha = b.alloc("crossing")
    beta = b.alloc("crossing")
    bigon = b.alloc("face")
    above = b.alloc("face") if same_walk else face
    e_face = d.face_of[(p, OTHER_SIDE[sp])]
    g_face = d.face_of[(q, OTHER_SIDE[sq])]
    fp, fq = b.forward[p], b.forward[q]

    # pieces in walk order: pa, pm, pb along p; qa, qm, qb along q
    pa, pb = (p, p_last) if sp == "l" else (p_last, p)
    qa, qb = (q, q_last) if sq == "l" else (q_last, q)
    for arc, last in ((p, p_last), (q, q_last)):
        if arc in d.loops:
            b.loops.discard(arc)
        else:
            b.replace_at(d.heads[arc], last)
            b.pref[last] = d.heads[arc]
    b.geo[alpha] = [[pa, q_mid, p_mid, qb], 1 if over == "1" else 0]
    b.geo[beta] = [[pb, qa, p_mid, q_mid], 1 if over == "1" else 0]

    def rel(walk_left: int, walk_right: int, side: str) -> tuple[int, int]:
        return (walk_left, walk_right) if side == "l" else (walk_right, walk_left)

    if sp == "l":
        prefs_p = {pa: (alpha, 0), p_mid: (beta, 2)}
    else:
        prefs_p = {pb: (beta, 0), p_mid: (alpha, 2)}
    if sq == "l":
        prefs_q = {qa: (beta, 1), q_mid: (alpha, 1)}
    else:
        prefs_q = {qb: (alpha, 3), q_mid: (beta, 3)}
    sides_p = {pa: rel(face, e_face, sp), p_mid: rel(g_face, bigon, sp), pb: rel(above, e_face, sp)}
    sides_q = {qa: rel(above, g_face, sq), q_mid: rel(e_face, bigon, sq), qb: rel(face, g_face, sq)}
    for arc, s in sides_p.items():
        b.put(arc, prefs_p.get(arc, b.pref.get(arc)), fp, s)
    for arc, s in sides_q.items():
        b.put(arc, prefs_q.get(arc, b.pref.get(arc)), fq, s)
    b.split(p_mid, OTHER_SIDE[sp], bigon)
    if same_walk:
        b.split(pb, sp, above)
    for old, new in ((p, p_mid), (p, p_last), (q, q_mid), (q, q_last)):
        if new != old:
            b.link(old, new)
    after = b.build()
    return b.step(m, after, local_after=(alpha, beta), interior_after=(p_mid, q_mid))


def _r2_del(d: PlanarDiagram, m: Move) -> Step:
    c1 = _crossing(d, m, "crossing1")
    c2 = _crossing(d, m, "crossing2")
    if c1 == c2:
        raise MoveError("r2_del needs two different crossings")
    pair = bigon_between(d, c1, c2)
    if pair is None:
        raise MoveError(f"crossings {c1} and {c2} do not bound a bigon")
    m1, m2 = pair
    tail = d.tails[m1]
    head = d.heads[m1]
    if tail[1] % 2 != head[1] % 2:
        raise MoveError("bigon is alternating")
    b = _Rebuild(d, m.ids)
    rename: dict[int, int] = {}

    def cur(a: int) -> int:
        while a in rename:
            a = rename[a]
        return a

    pending = []
    for mid in (m1, m2):
        t_cid, t_slot = d.tails[mid]
        h_cid, h_slot = d.heads[mid]
        a = cur(d.arc_at((t_cid, t_slot + 2)))
        z = cur(d.arc_at((h_cid, h_slot + 2)))
        b.drop(mid)
        pending.append((mid, a))
        if a == z:
            b.loops.add(a)
            b.pref[a] = None
            continue
        end = b.pref[z]
        b.replace_at(end, a)
        b.pref[a] = end
        la, ra = b.sides[a]
        lz, rz = b.sides[z]
        b.merges += [(la, lz), (ra, rz)]
        b.drop(z)
        rename[z] = a
        pending.append((z, a))
    del b.geo[c1]
    del b.geo[c2]
    for old, new in pending:
        b.link(old, cur(new))
    after = b.build()
    return b.step(m, after, local_before=(c1, c2), interior_before=(m1, m2))


def _r3(d: PlanarDiagram, m: Move) -> Step:
    face = _face(d, m, "face")
    info = r3_data(d, face)
    (a1, s1), (a2, s2), (a3, s3) = info["darts"]
    ends = info["ends"]
    r0, r2, r4 = info["corners"]
    ext = [d.arc_at(e) for e in ends]
    a_fwd = s2 == "l"
    b_fwd = s1 == "r"
    c_fwd = s3 == "l"
    b = _Rebuild(d, m.ids)
    ea = b.alloc("arc")
    eb = b.alloc("arc")
    ec = b.alloc("arc")
    z_ab = b.alloc("crossing")
    z_ac = b.alloc("crossing")
    z_bc = b.alloc("crossing")
    fwd_a, fwd_b, fwd_c = b.forward[a2], b.forward[a1], b.forward[a3]
    for y in info["crossings"]:
        del b.geo[y]
    for a in (a1, a2, a3):
        b.drop(a)
    b.geo[z_ab] = [[ea, eb, ext[3], ext[4]], 1 if info["a_over_b"] else 0]
    b.geo[z_ac] = [[ext[0], ec, ea, ext[5]], 1 if info["a_over_c"] else 0]
    b.geo[z_bc] = [[ext[1], ext[2], eb, ec], 1 if info["b_over_c"] else 0]
    moved = ((z_ac, 0), (z_bc, 0), (z_bc, 1), (z_ab, 2), (z_ab, 3), (z_ac, 3))
    for k, arc in enumerate(ext):
        if b.pref.get(arc) == ends[k]:
            b.pref[arc] = moved[k]
    b.put(ea, (z_ab, 0) if a_fwd else (z_ac, 2), fwd_a, (r4, face) if a_fwd else (face, r4))
    b.put(eb, (z_ab, 1) if b_fwd else (z_bc, 2), fwd_b, (face, r2) if b_fwd else (r2, face))
    b.put(ec, (z_ac, 1) if c_fwd else (z_bc, 3), fwd_c, (r0, face) if c_fwd else (face, r0))
    b.link(a2, ea)
    b.link(a1, eb)
    b.link(a3, ec)
    after = b.build()
    return b.step(
        m,
        after,
        local_before=info["crossings"],
        local_after=(z_ab, z_ac, z_bc),
        interior_before=(a1, a2, a3),
        interior_after=(ea, eb, ec),
        ends_before=ends,
        ends_after=tuple(b.slot_of(e) for e in moved),
    )


def _birth(d: PlanarDiagram, m: Move) -> Step:
    face = _face(d, m, "face")
    side = m.get("inner", "l")
    if side not in ("l", "r"):
        raise MoveError(f"inner= must be l or r, got {side!r}")
    b = _Rebuild(d, m.ids)
    loop = b.alloc("arc")
    inner = b.alloc("face")
    b.loops.add(loop)
    sides = (inner, face) if side == "l" else (face, inner)
    b.put(loop, None, m.get("orient", "+") != "-", sides)
    b.split(loop, side, inner)
    if m.get("outer") == "1":
        b.outer = inner
    after = b.build()
    return b.step(m, after, touched_after=(loop,))


def _death(d: PlanarDiagram, m: Move) -> Step:
    comp = _int(m, "component")
    if comp not in d.arcs:
        raise MoveError(f"no component {comp}")
    if comp not in d.loops:
        raise MoveError(f"death needs a crossingless component, {comp} has crossings")
    empty = [s for s in ("l", "r") if d.face_size(d.face_of[(comp, s)]) == 1]
    if not empty:
        raise MoveError(f"component {comp} does not bound an empty disk")
    side = next((s for s in empty if d.face_of[(comp, s)] != d.outer), empty[0])
    gone = d.face_of[(comp, side)]
    keep = d.face_of[(comp, OTHER_SIDE[side])]
    b = _Rebuild(d, m.ids)
    if gone == d.outer:
        b.outer = keep
    b.drop(comp)
    after = b.build()
    return b.step(m, after, touched_before=(comp,))


def _saddle(d: PlanarDiagram, m: Move) -> Step:
    dp = _dart(d, m, "end1")
    dq = _dart(d, m, "end2")
    face = d.face_of[dp]
    if d.face_of[dq] != face:
        raise MoveError("non-planar saddle: the two arc sides lie on different faces")
    p, sp = dp
    q, sq = dq
    if p == q and sp != sq:
        raise MoveError("saddle ends are the two sides of one arc")
    same_walk = d.walk_of[dp] == d.walk_of[dq]
    gp = d.face_of[(p, OTHER_SIDE[sp])]
    gq = d.face_of[(q, OTHER_SIDE[sq])]
    b = _Rebuild(d, m.ids)
    along_p = b.forward[p] == (sp == "l")
    along_q = b.forward[q] == (sq == "l")

    def walk_ends(arc: int, side: str) -> tuple[Slot, Slot]:
        if side == "l":
            return d.tails[arc], d.heads[arc]
        return d.heads[arc], d.tails[arc]

    if p == q:
        s_arc = b.alloc("arc")
        m_arc = b.alloc("arc")
        inner = b.alloc("face")
        if p in d.loops:
            b.loops.add(s_arc)
            pref = None
        else:
            w0, w1 = walk_ends(p, sp)
            b.replace_at(w0, s_arc)
            b.replace_at(w1, s_arc)
            pref = w1
        b.drop(p)
        b.put(s_arc, pref, along_p, (face, gp))
        b.loops.add(m_arc)
        b.put(m_arc, None, along_p, (inner, gp))
        b.split(m_arc, "l", inner)
        b.link(p, s_arc, sp == "l")
        b.link(p, m_arc, sp == "l")
        new = (s_arc, m_arc)
    elif p in d.loops or q in d.loops:
        joined = b.alloc("arc")
        if p in d.loops and q in d.loops:
            b.loops.add(joined)
            b.put(joined, None, along_p, (face, gp))
        else:
            host, side, along, g_host = (q, sq, along_q, gq) if p in d.loops else (p, sp, along_p, gp)
            w0, w1 = walk_ends(host, side)
            b.replace_at(w0, joined)
            b.replace_at(w1, joined)
            b.put(joined, w1, along, (face, g_host))
        b.merges.append((gp, gq))
        b.drop(p)
        b.drop(q)
        b.link(p, joined, sp == "l")
        b.link(q, joined, sq == "l")
        new = (joined,)
    else:
        arc_a = b.alloc("arc")
        arc_b = b.alloc("arc")
        other = b.alloc("face") if same_walk else face
        p0, p1 = walk_ends(p, sp)
        q0, q1 = walk_ends(q, sq)
        b.replace_at(p0, arc_a)
        b.replace_at(q1, arc_a)
        b.replace_at(q0, arc_b)
        b.replace_at(p1, arc_b)
        b.drop(p)
        b.drop(q)
        b.put(arc_a, q1, along_p, (face, gp))
        b.put(arc_b, p1, along_q, (other, gq))
        if same_walk:
            b.split(arc_b, "l", other)
        b.merges.append((gp, gq))
        b.link(p, arc_a, sp == "l")
        b.link(q, arc_a, sq == "l")
        b.link(q, arc_b, sq == "l")
        b.link(p, arc_b, sp == "l")
        new = (arc_a, arc_b)
    after = b.build()
    if m.get("reverse") is not None:
        after = _reverse_piece(b, after, new, _choice(m, "reverse", ("1", "2")))
    touched = (p,) if p == q else (p, q)
    return b.step(m, after, touched_before=touched, touched_after=new)


def _reverse_piece(b: _Rebuild, after: PlanarDiagram, new: tuple[int, ...], which: str) -> PlanarDiagram:
    """Reorient one of the two components a splitting saddle leaves behind."""
    if len(new) != 2 or after.component_of[new[0]] == after.component_of[new[1]]:
        raise MoveError("reverse= needs a saddle that splits a component")
    comp = after.component_of[new[int(which) - 1]]
    b.reversed ^= set(after.component_arcs(comp))
    return after.reoriented([comp])


def _decorate(d: PlanarDiagram, m: Move) -> Step:
    arc = _arc(d, m, "arc")
    links = tuple((a, a, True) for a in d.arcs)
    return Step(m, d, d, links=links, touched_before=(arc,), touched_after=(arc,))


def _reorient(d: PlanarDiagram, m: Move) -> Step:
    comp = _int(m, "component")
    if comp not in d.component_ids:
        raise MoveError(f"no component {comp}")
    after = d.reoriented([comp])
    arcs = d.component_arcs(comp)
    links = tuple((a, a, a not in arcs) for a in d.arcs)
    return Step(m, d, after, links=links, touched_before=arcs, touched_after=arcs)


_HANDLERS = {
    "r1_add": _r1_add,
    "r1_del": _r1_del,
    "r2_add": _r2_add,
    "r2_del": _r2_del,
    "r3": _r3,
    "birth": _birth,
    "death": _death,
    "saddle": _saddle,
    "star": _decorate,
    "dot": _decorate,
    "reorient": _reorient,
}


# ----------------------- Internal helpers -----------------------


def _reason(exc: Exception) -> str:
    if isinstance(exc, KeyError):
        return f"unknown id {exc.args[0]}"
    return str(exc)


def _int(m: Move, key: str) -> int:
    raw = m.get(key)
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise MoveError(f"{key}= expects an integer, got {raw!r}") from None


def _arc(d: PlanarDiagram, m: Move, key: str) -> int:
    arc = _int(m, key)
    if arc not in d.arcs:
        raise MoveError(f"no arc {arc}")
    return arc


def _crossing(d: PlanarDiagram, m: Move, key: str) -> int:
    cid = _int(m, key)
    if cid not in d.crossings:
        raise MoveError(f"no crossing {cid}")
    return cid


def _face(d: PlanarDiagram, m: Move, key: str) -> int:
    try:
        return face_ref(d, m.get(key) or "")
    except (DiagramError, ValueError) as exc:
        raise MoveError(f"bad face reference {m.get(key)!r}: {exc}") from None


def _dart(d: PlanarDiagram, m: Move, key: str) -> Dart:
    dart = parse_dart(m.get(key) or "")
    if dart not in d.face_of:
        raise MoveError(f"no arc {dart[0]}")
    return dart


def _choice(m: Move, key: str, options: tuple[str, ...]) -> str:
    value = m.get(key)
    if value not in options:
        raise MoveError(f"{key}= must be one of {'|'.join(options)}, got {value!r}")
    return value


def _side_on(d: PlanarDiagram, arc: int, face: int) -> str:
    for side in ("l", "r"):
        if d.face_of[(arc, side)] == face:
            return side
    raise MoveError(f"arc {arc} does not border face {face}")
