"""Chain maps for Reidemeister moves by Gaussian elimination.

The complex of the side with the extra crossings is reduced by cancelling
unit entries b -> c of its differential: for each cancelled pair

    d'(x) = d(x) - d(b)·a^-1·<c, d x>,  i(x) = x - b·a^-1·<c, d x>,
    p(c) = -a^-1·(d(b) - a c),  p(b) = 0,

where a = <c, d b>. The pairs are chosen locally:

* RI: the kink crossing is resolved so that its loop is a small circle
  on one side; the small circle labeled 1 cancels through the merge (or,
  when the small circle appears at the 1-smoothing, every generator at the
  0-smoothing cancels against the small circle labeled X).
* RII: with both bigon crossings at 00, the split into the bigon circle
  cancels against that circle labeled X; the bigon circle labeled 1
  cancels through the merge into 11.
* RIII: the crossing between the two lower strands is smoothed so that
  the triangle corner closes; in that layer the other two crossings form
  an RII pattern around the triangle circle and cancel the same way.

The survivors are matched with the generators of the other side by their
exterior bits, the planar matching of the move disk's boundary points and
the labels of circles keyed by the arcs both diagrams share; a ±1 gauge
that turns one differential into the other is found and verified.
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from typing import Callable, Iterable

from khmix.core.errors import MoveError
from khmix.services.frobenius.algebra import ONE, X
from khmix.services.frobenius.upoly import UPoly
from khmix.services.khcomplex.complex import KhComplex
from khmix.services.khcomplex.matrix import Chain, SparseUMatrix, chain_iadd
from khmix.services.linkdiag.diagram import PlanarDiagram, Slot
from khmix.services.linkdiag.resolution import SMOOTHING, Resolution
from khmix.services.movie.moves import Step

logger = logging.getLogger("khmix.movie")

Key = tuple


class Reduction:
    """Gaussian elimination on a complex, remembering inclusion and projection data."""

    def __init__(self, c: KhComplex):
        self.c = c
        self.cols: dict[int, dict[int, UPoly]] = {}
        self.rows: dict[int, dict[int, UPoly]] = {}
        for r, col, v in c.differential.entries():
            self.cols.setdefault(col, {})[r] = v
            self.rows.setdefault(r, {})[col] = v
        self.alive = set(range(len(c)))
        self.steps: list[tuple[int, int, object, dict[int, UPoly], dict[int, UPoly]]] = []

    def column(self, b: int) -> dict[int, UPoly]:
        return self.cols.get(b, {})

    def cancel(self, b: int, c: int) -> None:
        entry = self.cols.get(b, {}).get(c)
        if entry is None or not entry.is_monomial() or entry.monomial_term()[0] != 0:
            raise MoveError(f"cannot cancel {self.c.generators[b]} -> {self.c.generators[c]}")
        inv = self.c.table.K.one / entry.monomial_term()[1]
        colb = {y: v for y, v in self.cols.get(b, {}).items() if y != c}
        rowc = {x: v for x, v in self.rows.get(c, {}).items() if x != b}
        for x, dcx in rowc.items():
            lam = dcx.scale(inv)
            for y, dyb in colb.items():
                self._add(y, x, -(dyb * lam))
        for g in (b, c):
            for y in self.cols.pop(g, {}):
                self.rows.get(y, {}).pop(g, None)
            for x in self.rows.pop(g, {}):
                self.cols.get(x, {}).pop(g, None)
        self.alive.discard(b)
        self.alive.discard(c)
        self.steps.append((b, c, inv, colb, rowc))

    def project(self, x: Chain) -> Chain:
        out = dict(x)
        for b, c, inv, colb, _ in self.steps:
            out.pop(b, None)
            lam = out.pop(c, None)
            if lam:
                for y, v in colb.items():
                    chain_iadd(out, y, -(v * lam).scale(inv))
        return out

    def include(self, x: Chain) -> Chain:
        out = dict(x)
        for b, c, inv, _, rowc in reversed(self.steps):
            coef = UPoly()
            for g, v in out.items():
                w = rowc.get(g)
                if w is not None:
                    coef = coef + v * w
            if coef:
                chain_iadd(out, b, -coef.scale(inv))
        return out

    def entry(self, y: int, x: int) -> UPoly:
        return self.cols.get(x, {}).get(y) or UPoly()

    def survivors(self) -> list[int]:
        return sorted(self.alive)

    def _add(self, y: int, x: int, v: UPoly) -> None:
        if not v:
            return
        col = self.cols.setdefault(x, {})
        chain_iadd(col, y, v)
        if y in col:
            self.rows.setdefault(y, {})[x] = col[y]
        else:
            self.rows.get(y, {}).pop(x, None)


# ----------------------- Public API -----------------------


def reidemeister_matrix(step: Step, source: KhComplex, target: KhComplex, log: logging.Logger) -> SparseUMatrix:
    """Matrix (columns: source generators) of the chain map of an R move."""
    kind = step.kind
    if kind in ("r1_add", "r2_add"):
        red = _reduce(step, target, after=True)
        phi = _match(step, source, red, small_is_source=True)
        columns = [red.include({phi[i][0]: _unit(source, phi[i][1])}) for i in range(len(source))]
    elif kind in ("r1_del", "r2_del"):
        red = _reduce(step, source, after=False)
        phi = _match(step, target, red, small_is_source=False)
        back = {t: (s, sign) for s, (t, sign) in phi.items()}
        columns = []
        for i in range(len(source)):
            image: Chain = {}
            for t, coef in red.project({i: _unit(source, 1)}).items():
                s, sign = back[t]
                chain_iadd(image, s, coef.scale(source.table.c(sign)))
            columns.append(image)
    elif kind == "r3":
        red_before = _reduce(step, source, after=False)
        red_after = _reduce(step, target, after=True)
        phi = _match_reduced(step, red_before, red_after)
        columns = []
        for i in range(len(source)):
            image: Chain = {}
            for t, coef in red_before.project({i: _unit(source, 1)}).items():
                s, sign = phi[t]
                chain_iadd(image, s, coef.scale(source.table.c(sign)))
            columns.append(red_after.include(image))
    else:
        raise MoveError(f"{kind} is not a Reidemeister move")
    log.debug("%s: %d -> %d generators", kind, len(source), len(target))
    return SparseUMatrix.from_columns(len(target), columns, (0, 0))


def r3_external_crossings(step: Step, after: bool, strand: str = "over") -> tuple[int, int]:
    """The two crossings on the strand of an RIII triangle that passes over (or under) both others.

    Seen from that strand the third crossing is internal; the sum of the
    two external bits is the external grading of a cube vertex.
    """
    if step.kind != "r3":
        raise MoveError(f"{step.kind} has no external crossings")
    if strand not in ("over", "under"):
        raise MoveError(f"strand must be over or under, not {strand!r}")
    local = step.local_after if after else step.local_before
    roles = _r3_roles(step, after)
    side = 0 if strand == "over" else 1
    moving, n = Counter(pair[side] for pair in roles.values()).most_common(1)[0]
    if n != 2:
        raise MoveError("the triangle is cyclic: no strand passes over both others")
    return tuple(cid for cid in local if moving in roles[cid])


# ----------------------- Reduction rules -----------------------


def _reduce(step: Step, c: KhComplex, after: bool) -> Reduction:
    d = c.diagram
    local = step.local_after if after else step.local_before
    interior = step.interior_after if after else step.interior_before
    red = Reduction(c)
    pos = {cid: d.crossing_ids.index(cid) for cid in local}
    if step.kind.startswith("r1"):
        (x,) = local
        (loop,) = interior
        r_small = _bit_with_circle(c, lambda v: v[pos[x]], {loop})
        if r_small == 0:
            _cancel_layer(
                red,
                lambda g, res: g.vertex[pos[x]] == 0 and _label_of(g, res, {loop}) == ONE,
                lambda g, res: g.vertex[pos[x]] == 1,
            )
        else:
            _cancel_layer(
                red,
                lambda g, res: g.vertex[pos[x]] == 0,
                lambda g, res: g.vertex[pos[x]] == 1 and _label_of(g, res, {loop}) == X,
            )
        return red
    if step.kind.startswith("r2"):
        u1, u2 = local
        _cancel_bigon(red, pos[u1], pos[u2], set(interior), lambda v: True)
        return red
    x, others = _r3_split(d, local, interior, after, step)
    r0 = None
    for bit in (0, 1):
        try:
            _circle_state(c, pos[others[0]], pos[others[1]], set(interior), lambda v, b=bit: v[pos[x]] == b)
        except MoveError:
            continue
        r0 = bit
    if r0 is None:
        raise MoveError("no smoothing of the lower crossing closes the triangle")
    _cancel_bigon(red, pos[others[0]], pos[others[1]], set(interior), lambda v: v[pos[x]] == r0)
    return red


def _cancel_bigon(red: Reduction, i1: int, i2: int, circle: set[int], layer: Callable) -> None:
    c = red.c
    state = _circle_state(c, i1, i2, circle, layer)

    def local(v) -> tuple[int, int]:
        return v[i1], v[i2]

    _cancel_layer(
        red,
        lambda g, res: layer(g.vertex) and local(g.vertex) == (0, 0),
        lambda g, res: layer(g.vertex) and local(g.vertex) == state and _label_of(g, res, circle) == X,
    )
    _cancel_layer(
        red,
        lambda g, res: layer(g.vertex) and local(g.vertex) == state and _label_of(g, res, circle) == ONE,
        lambda g, res: layer(g.vertex) and local(g.vertex) == (1, 1),
    )


def _cancel_layer(red: Reduction, source: Callable, target: Callable) -> None:
    c = red.c
    gens = c.generators
    for b in range(len(gens)):
        g = gens[b]
        if b not in red.alive or not source(g, c.resolutions[g.vertex]):
            continue
        hits = [y for y in red.column(b) if target(gens[y], c.resolutions[gens[y].vertex])]
        if len(hits) != 1:
            raise MoveError(f"generator {g} has {len(hits)} cancellation partners")
        red.cancel(b, hits[0])


def _circle_state(c: KhComplex, i1: int, i2: int, circle: set[int], layer: Callable) -> tuple[int, int]:
    found = None
    for v, res in c.resolutions.items():
        if not layer(v):
            continue
        if any(set(circ) == circle for circ in res.circles):
            here = (v[i1], v[i2])
            if found is not None and found != here:
                raise MoveError("bigon circle appears in two local states")
            found = here
    if found is None or found[0] == found[1]:
        raise MoveError("no mixed local state carries the bigon circle")
    return found


def _bit_with_circle(c: KhComplex, bit_of: Callable, circle: set[int]) -> int:
    for v, res in c.resolutions.items():
        if any(set(circ) == circle for circ in res.circles):
            return bit_of(v)
    raise MoveError("the kink loop never forms its own circle")


def _label_of(g, res: Resolution, circle: set[int]) -> int | None:
    for i, circ in enumerate(res.circles):
        if set(circ) == circle:
            return g.labels[i]
    return None


def _r3_split(d: PlanarDiagram, local, interior, after: bool, step: Step) -> tuple[int, tuple[int, int]]:
    """The crossing between the two lower strands, and the other two crossings."""
    external = r3_external_crossings(step, after, "over")
    x = next(cid for cid in local if cid not in external)
    return x, external


def _r3_roles(step: Step, after: bool) -> dict[int, tuple[str, str]]:
    """(over strand, under strand) at each crossing of the triangle."""
    d = step.after if after else step.before
    local = step.local_after if after else step.local_before
    strand = _r3_strands(step, after)
    roles = {}
    for cid in local:
        over = under = None
        for slot, arc in enumerate(d.crossings[cid].arcs):
            if arc in strand:
                if slot % 2:
                    over = strand[arc]
                else:
                    under = strand[arc]
        if over is None or under is None:
            raise MoveError(f"crossing {cid} is not a triangle corner")
        roles[cid] = (over, under)
    return roles


def _r3_strands(step: Step, after: bool) -> dict[int, str]:
    """Strand letter of each interior arc (the same letter on both sides of the move)."""
    if not after:
        a1, a2, a3 = step.interior_before
        return {a1: "B", a2: "A", a3: "C"}
    ea, eb, ec = step.interior_after
    return {ea: "A", eb: "B", ec: "C"}


# ----------------------- Matching survivors -----------------------


def _common(step: Step) -> tuple[set[int], set[int]]:
    arcs = set(step.before.arcs) & set(step.after.arcs)
    crossings = set(step.before.crossings) & set(step.after.crossings)
    return arcs, crossings


def _key(step: Step, c: KhComplex, i: int, after: bool) -> Key:
    arcs, crossings = _common(step)
    d = c.diagram
    g = c.generators[i]
    res = c.resolutions[g.vertex]
    bits = tuple(b for cid, b in zip(d.crossing_ids, g.vertex) if cid in crossings)
    labels = []
    for k, circ in enumerate(res.circles):
        shared = frozenset(a for a in circ if a in arcs)
        if shared:
            labels.append((shared, g.labels[k]))
    matching = None
    if step.kind == "r3":
        ends = step.ends_after if after else step.ends_before
        matching = _end_matching(d, g.vertex, ends)
    return (g.h, g.q), bits, frozenset(labels), matching


def _end_matching(d: PlanarDiagram, vertex, ends: Iterable[Slot]) -> frozenset:
    ends = list(ends)
    index = {e: k for k, e in enumerate(ends)}
    bit = dict(zip(d.crossing_ids, vertex))
    pairs = set()
    for k, (cid, slot) in enumerate(ends):
        cur_cid, cur_slot = cid, slot
        while True:
            partner = _smoothing_partner(bit[cur_cid], cur_slot)
            here = (cur_cid, partner)
            if here in index:
                pairs.add(frozenset((k, index[here])))
                break
            arc = d.crossings[cur_cid].arcs[partner]
            head, tail = d.heads[arc], d.tails[arc]
            cur_cid, cur_slot = tail if head == here else head
    return frozenset(pairs)


def _smoothing_partner(bit: int, slot: int) -> int:
    for a, b in SMOOTHING[bit]:
        if slot == a:
            return b
        if slot == b:
            return a
    raise MoveError(f"slot {slot} outside the crossing")


def _match(step: Step, small: KhComplex, red: Reduction, small_is_source: bool) -> dict[int, tuple[int, int]]:
    """small generator -> (survivor, sign) turning the small differential into the reduced one."""
    big = red.c
    by_key = {}
    for t in red.survivors():
        by_key.setdefault(_key(step, big, t, after=small_is_source), []).append(t)
    pairing = {}
    for s in range(len(small)):
        hits = by_key.get(_key(step, small, s, after=not small_is_source), [])
        if len(hits) != 1:
            raise MoveError(f"generator {small.generators[s]} matches {len(hits)} survivors")
        pairing[s] = hits[0]
    if len(set(pairing.values())) != len(red.survivors()):
        raise MoveError("survivors and generators are not in bijection")

    def entry(y: int, x: int) -> UPoly:
        return small.differential.get(y, x)

    signs = _gauge(
        len(small),
        entry,
        lambda y, x: red.entry(pairing[y], pairing[x]),
        lambda i: small.grading(i) == big.grading(pairing[i]),
        small.table,
        red_nnz=sum(len(col) for col in red.cols.values()),
        small_nnz=small.differential.nnz,
    )
    return {s: (pairing[s], signs[s]) for s in pairing}


def _match_reduced(step: Step, before: Reduction, after: Reduction) -> dict[int, tuple[int, int]]:
    """before survivor -> (after survivor, sign)."""
    by_key = {}
    for t in after.survivors():
        by_key.setdefault(_key(step, after.c, t, after=True), []).append(t)
    src = before.survivors()
    pairing = {}
    for s in src:
        hits = by_key.get(_key(step, before.c, s, after=False), [])
        if len(hits) != 1:
            raise MoveError(f"survivor {before.c.generators[s]} matches {len(hits)} survivors")
        pairing[s] = hits[0]
    if len(set(pairing.values())) != len(after.survivors()):
        raise MoveError("survivors of the two sides are not in bijection")
    order = {s: k for k, s in enumerate(src)}
    signs = _gauge(
        len(src),
        lambda y, x: before.entry(src[y], src[x]),
        lambda y, x: after.entry(pairing[src[y]], pairing[src[x]]),
        lambda i: before.c.grading(src[i]) == after.c.grading(pairing[src[i]]),
        before.c.table,
        red_nnz=sum(len(col) for col in after.cols.values()),
        small_nnz=sum(len(col) for col in before.cols.values()),
    )
    return {s: (pairing[s], signs[order[s]]) for s in src}


def _gauge(n: int, left: Callable, right: Callable, graded: Callable, table, red_nnz: int, small_nnz: int) -> list[int]:
    """Signs e with right(y, x) = e_y e_x left(y, x), found by BFS and then checked."""
    for i in range(n):
        if not graded(i):
            raise MoveError("matched generators sit in different bigradings")
    if red_nnz != small_nnz:
        raise MoveError("reduced differential and target differential differ in support")
    adj: dict[int, set[int]] = {i: set() for i in range(n)}
    support = []
    for x in range(n):
        for y in range(n):
            if left(y, x):
                adj[x].add(y)
                adj[y].add(x)
                support.append((y, x))
    sign: dict[int, int] = {}
    for root in range(n):
        if root in sign:
            continue
        sign[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in sign:
                    continue
                a = left(w, u) or left(u, w)
                b = right(w, u) if left(w, u) else right(u, w)
                if b == a:
                    sign[w] = sign[u]
                elif b == -a:
                    sign[w] = -sign[u]
                else:
                    raise MoveError("reduced differential differs from the target beyond signs")
                queue.append(w)
    for y, x in support:
        if right(y, x) != left(y, x).scale(table.c(sign[x] * sign[y])):
            raise MoveError("no sign gauge identifies the two differentials")
    return [sign[i] for i in range(n)]


def _unit(c: KhComplex, sign: int) -> UPoly:
    return UPoly.monomial(c.table.c(sign))
