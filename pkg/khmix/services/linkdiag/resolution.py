"""Kauffman resolutions, circle tracing and checkerboard colorings."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from networkx.utils import UnionFind

from khmix.core.errors import DiagramError
from khmix.services.linkdiag.diagram import PlanarDiagram

# slot pairs joined by each smoothing
SMOOTHING = {0: ((0, 1), (2, 3)), 1: ((0, 3), (1, 2))}
# corners (sector i between slots i and i+1) whose faces become one region
CORNER_MERGE = {0: (1, 3), 1: (0, 2)}


@dataclass(frozen=True)
class Resolution:
    vertex: tuple[int, ...]
    circles: tuple[tuple[int, ...], ...]
    circle_of: dict[int, int]

    @property
    def size(self) -> int:
        return sum(self.vertex)

    def __len__(self) -> int:
        return len(self.circles)


@dataclass(frozen=True)
class Checkerboard:
    """Region id per face and a color per region (0 white, 1 black)."""

    region_of: dict[int, int]
    color: dict[int, int]

    def face_color(self, face: int) -> int:
        return self.color[self.region_of[face]]


def resolve(d: PlanarDiagram, vertex: Sequence[int]) -> Resolution:
    """Smooth every crossing (bits follow ``d.crossing_ids``) and trace circles."""
    vertex = tuple(int(b) for b in vertex)
    ids = d.crossing_ids
    if len(vertex) != len(ids):
        raise DiagramError(f"vertex has {len(vertex)} bits, diagram has {len(ids)} crossings")
    if any(b not in (0, 1) for b in vertex):
        raise DiagramError(f"vertex {vertex} is not a bit vector")
    uf = UnionFind(d.arcs)
    for cid, bit in zip(ids, vertex):
        arcs = d.crossings[cid].arcs
        for i, j in SMOOTHING[bit]:
            uf.union(arcs[i], arcs[j])
    circles = sorted((tuple(sorted(c)) for c in uf.to_sets()), key=lambda c: c[0])
    circle_of = {a: i for i, c in enumerate(circles) for a in c}
    return Resolution(vertex, tuple(circles), circle_of)


def checkerboard(d: PlanarDiagram, resolution: Resolution | None = None) -> Checkerboard:
    """Two-color the regions of ``d`` (or of a resolution of it), outer region white."""
    uf = UnionFind(d.faces)
    if resolution is not None:
        for cid, bit in zip(d.crossing_ids, resolution.vertex):
            i, j = CORNER_MERGE[bit]
            uf.union(d.corner_face(cid, i), d.corner_face(cid, j))
    region_of = {f: uf[f] for f in d.faces}
    adjacent: dict[int, set[int]] = {r: set() for r in region_of.values()}
    for arc in d.arcs:
        left = region_of[d.face_of[(arc, "l")]]
        right = region_of[d.face_of[(arc, "r")]]
        if left == right:
            raise DiagramError(f"arc {arc} has the same region on both sides")
        adjacent[left].add(right)
        adjacent[right].add(left)
    start = region_of[d.outer]
    color = {start: 0}
    queue = deque([start])
    while queue:
        r = queue.popleft()
        for s in adjacent[r]:
            if s not in color:
                color[s] = 1 - color[r]
                queue.append(s)
            elif color[s] == color[r]:
                raise DiagramError("regions admit no checkerboard coloring")
    return Checkerboard(region_of, color)


def all_vertices(n: int) -> list[tuple[int, ...]]:
    """Cube vertices in lexicographic bit order."""
    return list(_vertices(n))


@lru_cache(maxsize=None)
def _vertices(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple((v >> (n - 1 - i)) & 1 for i in range(n)) for v in range(2**n))
