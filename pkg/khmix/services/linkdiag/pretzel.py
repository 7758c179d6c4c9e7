"""Pretzel diagrams assembled from their twist columns.

Columns stand side by side; column ``i`` carries ``|n_i|`` crossings stacked
top to bottom, and a zero column is two vertical strands. Neighbouring
columns are joined along the top and the bottom, and the outermost strands
close up around the diagram. Arcs are numbered along the orientation found
by walking the strands, so the result is an ordinary canonical diagram.
"""

from __future__ import annotations

from dataclasses import dataclass

from khmix.core.errors import DiagramError
from khmix.services.linkdiag.diagram import Crossing, PlanarDiagram
from khmix.services.linkdiag.parser import build_diagram

# corners of a column crossing, counterclockwise
NW, SW, SE, NE = range(4)

Port = tuple  # (crossing id, corner) or ("v", column, corner) for a zero column


@dataclass(frozen=True)
class Pretzel:
    diagram: PlanarDiagram
    twists: tuple[int, ...]
    # crossing ids of each column, top to bottom
    columns: tuple[tuple[int, ...], ...]

    def mirror(self) -> "Pretzel":
        return Pretzel(self.diagram.mirror(), tuple(-n for n in self.twists), self.columns)

    def internal_arcs(self, column: int) -> set[int]:
        """Arcs running between two crossings of one column."""
        ids = set(self.columns[column])
        d = self.diagram
        return {a for a in d.arcs if a not in d.loops and d.heads[a][0] in ids and d.tails[a][0] in ids}


def pretzel(*twists: int) -> Pretzel:
    """P(n_1, ..., n_k). A positive column puts its NW-SE strands on top."""
    if len(twists) < 2 or not any(twists):
        raise DiagramError(f"a pretzel needs two columns and at least one crossing, got {twists}")
    columns: list[tuple[int, ...]] = []
    tops: list[tuple[Port, Port]] = []
    bottoms: list[tuple[Port, Port]] = []
    edges: list[tuple[Port, Port]] = []
    over: dict[int, tuple[int, int]] = {}
    cid = 0
    for i, n in enumerate(twists):
        col = tuple(range(cid, cid + abs(n)))
        cid += abs(n)
        columns.append(col)
        for c in col:
            over[c] = (NW, SE) if n > 0 else (SW, NE)
        for a, b in zip(col, col[1:]):
            edges.append(((a, SW), (b, NW)))
            edges.append(((a, SE), (b, NE)))
        if col:
            tops.append(((col[0], NW), (col[0], NE)))
            bottoms.append(((col[-1], SW), (col[-1], SE)))
        else:
            tops.append((("v", i, NW), ("v", i, NE)))
            bottoms.append((("v", i, SW), ("v", i, SE)))
            edges.append((("v", i, NW), ("v", i, SW)))
            edges.append((("v", i, NE), ("v", i, SE)))
    for (_, right), (left, _) in zip(tops, tops[1:]):
        edges.append((right, left))
    for (_, right), (left, _) in zip(bottoms, bottoms[1:]):
        edges.append((right, left))
    edges.append((tops[0][0], tops[-1][1]))
    edges.append((bottoms[0][0], bottoms[-1][1]))
    return Pretzel(_assemble(_contract(edges), over), tuple(twists), tuple(columns))


# ----------------------- Internal helpers -----------------------


def _contract(edges: list[tuple[Port, Port]]) -> list[tuple[Port, Port]]:
    """Splice out the virtual ports of zero columns."""
    out = list(edges)
    while True:
        virtual = next((p for e in out for p in e if p[0] == "v"), None)
        if virtual is None:
            return out
        touching = [e for e in out if virtual in e]
        if len(touching) != 2:
            raise DiagramError("a zero column closes up on itself")
        for e in touching:
            out.remove(e)
        ends = [q for e in touching for q in e if q != virtual]
        out.append((ends[0], ends[1]))


def _assemble(edges: list[tuple[Port, Port]], over: dict[int, tuple[int, int]]) -> PlanarDiagram:
    partner: dict[Port, Port] = {}
    for p, q in edges:
        partner[p] = q
        partner[q] = p
    arc_at: dict[Port, int] = {}
    incoming: set[Port] = set()
    arc = 0
    for p, _ in edges:
        port = p
        while port not in arc_at:
            there = partner[port]
            arc += 1
            arc_at[port] = arc_at[there] = arc
            incoming.add(there)
            port = (there[0], (there[1] + 2) % 4)
    crossings = {}
    for c, top in over.items():
        start = next(k for k in range(4) if k not in top and (c, k) in incoming)
        slots = [(start + j) % 4 for j in range(4)]
        o = 1 if (c, slots[3]) in incoming else -1
        crossings[c] = Crossing(tuple(arc_at[(c, k)] for k in slots), o)
    return build_diagram(crossings, [], {})
