"""Admissible cuts: a frame splitting a movie into two nonorientable halves."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from khmix.core.errors import CutError
from khmix.services.linkdiag.diagram import PlanarDiagram
from khmix.services.movie.algebra import halves
from khmix.services.movie.movie import Movie
from khmix.services.movie.stats import SurfaceStats, surface_stats

logger = logging.getLogger("khmix.mixed")

# Below this total crosscap number the invariant may depend on the cut.
UNIQUE_CROSSCAP = 3


@dataclass
class CutSpec:
    frame: int
    link: PlanarDiagram
    first: SurfaceStats
    second: SurfaceStats
    whole: SurfaceStats
    warnings: list[str] = field(default_factory=list)

    @property
    def crosscap(self) -> int:
        return self.whole.crosscap

    @property
    def crosscap_split(self) -> tuple[int, int]:
        return self.first.crosscap, self.second.crosscap

    @property
    def cut_independent(self) -> bool:
        return self.crosscap >= UNIQUE_CROSSCAP


def validate_cut(movie: Movie, log: logging.Logger | None = None) -> CutSpec:
    """Check that both sides of the cut are nonorientable."""
    log = log or logger
    first, second = halves(movie)
    st1 = surface_stats(first, log)
    st2 = surface_stats(second, log)
    for name, st in (("first", st1), ("second", st2)):
        if st.orientable:
            raise CutError(f"cut not admissible: the {name} half of {movie!r} is orientable")
    spec = CutSpec(movie.cut, movie.frames[movie.cut], st1, st2, surface_stats(movie, log))
    if not spec.cut_independent:
        msg = f"crosscap number {spec.crosscap} < {UNIQUE_CROSSCAP}: the result may depend on the cut"
        spec.warnings.append(msg)
        log.warning("%s (%r)", msg, movie)
    log.debug("cut at frame %d splits crosscaps %s", spec.frame, spec.crosscap_split)
    return spec
