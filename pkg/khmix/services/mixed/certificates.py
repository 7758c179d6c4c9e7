"""Nonvanishing certificates read off ordinary (hat) Khovanov homology.

For a surface of crosscap number at least 3 the boundary of the mixed class
equals the hat map applied to the reduction of the source class, and the
mixed map precomposed with the hat-to-minus boundary equals the inclusion
of the hat image into the plus flavor. Either image being nonzero shows the
mixed invariant is nonzero.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from khmix.core.errors import KhmixError
from khmix.services.homology.module import HomClass, KhHomology, chain_window, homology
from khmix.services.khcomplex.complex import KhComplex
from khmix.services.khcomplex.matrix import Chain
from khmix.services.mixed.cut import UNIQUE_CROSSCAP
from khmix.services.movie.maps import ChainMap, movie_complexes, movie_maps, push_chain
from khmix.services.movie.movie import Movie
from khmix.services.movie.stats import surface_stats

logger = logging.getLogger("khmix.mixed")


@dataclass
class HatCertificate:
    pushed: HomClass
    pulled: HomClass
    crosscap: int

    @property
    def hat_push(self) -> bool:
        return not self.pushed.is_zero()

    @property
    def hat_pull(self) -> bool:
        return not self.pulled.is_zero()

    @property
    def certifies_nonzero(self) -> bool:
        return self.crosscap >= UNIQUE_CROSSCAP and (self.hat_push or self.hat_pull)

    def to_dict(self) -> dict:
        return {
            "hat_push": self.hat_push,
            "hat_pull": self.hat_pull,
            "certifies_nonzero": self.certifies_nonzero,
        }


def hat_images(maps: Sequence[ChainMap], hom_end: KhHomology, x: Chain, crosscap: int) -> HatCertificate:
    """Hat image of the reduction of x under the maps in turn, and its inclusion into the plus flavor."""
    pushed = hom_end.classify(push_chain(maps, chain_window(x, 0, 1), hat=True), "hat")
    pulled = hom_end.les_map("iota", pushed)
    return HatCertificate(pushed, pulled, crosscap)


def certify_nonzero_via_hat(
    movie: Movie, x: Chain | None = None, log: logging.Logger | None = None
) -> HatCertificate:
    """Certificate for a movie with or without a cut; ``x`` defaults to 1 on the empty link."""
    log = log or logger
    complexes = movie_complexes(movie)
    maps = movie_maps(movie, complexes, log)
    x = source_chain(complexes[0], x)
    hom_end = homology(complexes[-1], log)
    cert = hat_images(maps, hom_end, x, surface_stats(movie, log).crosscap)
    log.info(
        "hat certificate for %r: push=%s pull=%s (crosscap %d)",
        movie,
        cert.hat_push,
        cert.hat_pull,
        cert.crosscap,
    )
    return cert


def source_chain(c: KhComplex, x: Chain | HomClass | None) -> Chain:
    """The chain a movie map is applied to: an explicit cycle, a class representative, or 1."""
    if isinstance(x, HomClass):
        return x.homology.representative(x)
    if x is not None:
        return x
    if c.diagram.arcs:
        raise KhmixError("a source class is required when the movie starts from a nonempty link")
    return {0: c.table.poly(1)}
