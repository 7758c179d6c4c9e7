"""The mixed invariant of a movie with an admissible cut.

The first half is applied in the minus flavor. Its image is U-torsion, so it
bounds a chain of C^infty; the part of that chain with negative U powers is
a cycle of C^+, and the second half carries it to the plus flavor of the
last frame.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

from sympy.polys.domains import QQ

from khmix.core.errors import GradingError, NotTorsionError
from khmix.services.frobenius.scalars import format_scalar
from khmix.services.homology.module import HomClass, KhHomology, chain_window, homology, pole_depth
from khmix.services.khcomplex.complex import KhComplex
from khmix.services.khcomplex.matrix import Chain, chain_add
from khmix.services.mixed.certificates import HatCertificate, hat_images, source_chain
from khmix.services.mixed.cut import CutSpec, validate_cut
from khmix.services.movie.maps import MovieCache, push_chain
from khmix.services.movie.movie import Movie


@dataclass
class MixedResult:
    """The mixed class, defined up to an overall sign, with its certificates."""

    cls: HomClass
    bigrading: tuple[int, int] | None
    expected_bigrading: tuple[int, int]
    cut: CutSpec
    certificate: HatCertificate
    boundary: HomClass
    hred_dim: int
    primitive_depth: int
    warnings: list[str] = field(default_factory=list)

    @property
    def zero(self) -> bool:
        return self.cls.is_zero()

    @property
    def boundary_agrees(self) -> bool:
        """The connecting map of the mixed class matches the hat image up to sign."""
        return self.boundary.equals_up_to_sign(self.certificate.pushed)

    def coords(self) -> list[dict[str, Any]]:
        K = self.cls.homology.complex.table.K
        return [
            {"kind": kind, "index": idx, "u_power": str(exp), "coefficient": format_scalar(K, s)}
            for kind, idx, exp, s in self.cls.coordinate_list()
        ]

    def certificates(self) -> dict[str, Any]:
        return {
            "hat_push": self.certificate.hat_push,
            "hat_pull": self.certificate.hat_pull,
            "hred_dim": self.hred_dim,
        }


class MixedInvariant:
    """Runs the minus map, the torsion primitive and the plus map across a cut.

    One instance keeps the frame complexes, elementary maps and homologies it
    has built, so runs on slices of a movie reuse the work done for the whole.
    """

    def __init__(self, logger: logging.Logger, jobs: int = 1):
        self.logger = logger
        self.cache = MovieCache(logger, jobs)
        self.homologies: dict[int, KhHomology] = {}

    # ----------------------- Public API -----------------------

    def run(
        self,
        movie: Movie,
        source: Chain | HomClass | None = None,
        perturbation: Chain | None = None,
    ) -> MixedResult:
        """Mixed class of ``source`` (1 on the empty link by default).

        ``perturbation`` is a cycle of C^infty of the cut frame added to the
        primitive; the result must not depend on it.
        """
        spec = validate_cut(movie, self.logger)
        complexes, maps = self.cache.movie(movie)
        first, second = maps[: spec.frame], maps[spec.frame :]

        x = source_chain(complexes[0], source)
        hom_cut = self.homology(complexes[spec.frame])
        hom_end = self.homology(complexes[-1])

        z = push_chain(first, x)
        primitive = self._primitive(hom_cut, z, movie)
        if perturbation:
            primitive = chain_add(primitive, perturbation)
        y = chain_window(push_chain(second, chain_window(primitive, None, 0)), None, 0)
        _, cls = hom_end.plus_is_zero(y)
        cls = canonical_sign(cls)

        cert = hat_images(maps, hom_end, x, spec.crosscap)
        boundary = hom_end.les_map("d_plus_hat", cls)
        expected = _expected_bigrading(complexes[0], x, spec)
        bigrading = cls.grading
        warnings = list(spec.warnings)
        if bigrading is not None and bigrading != expected:
            raise GradingError(f"mixed class sits at {bigrading}, expected {expected}")
        result = MixedResult(
            cls=cls,
            bigrading=bigrading,
            expected_bigrading=expected,
            cut=spec,
            certificate=cert,
            boundary=boundary,
            hred_dim=hom_cut.h_red().total_dimension(),
            primitive_depth=pole_depth(primitive),
            warnings=warnings,
        )
        self.logger.info(
            "mixed invariant of %r: zero=%s at %s (crosscap %s, primitive depth %d)",
            movie,
            result.zero,
            expected,
            spec.crosscap_split,
            result.primitive_depth,
        )
        return result

    def homology(self, c: KhComplex) -> KhHomology:
        h = self.homologies.get(id(c))
        if h is None:
            h = self.homologies[id(c)] = homology(c, self.logger)
        return h

    # ----------------------- Internal helpers -----------------------

    def _primitive(self, hom_cut: KhHomology, z: Chain, movie: Movie) -> Chain:
        try:
            return hom_cut.solve_torsion_primitive(z)
        except NotTorsionError as exc:
            raise NotTorsionError(
                f"{movie!r}: the first half's image is not U-torsion; is that half orientable?"
            ) from exc


def mixed_invariant(
    movie: Movie,
    source: Chain | HomClass | None = None,
    log: logging.Logger | None = None,
    perturbation: Chain | None = None,
) -> MixedResult:
    return MixedInvariant(log or logging.getLogger("khmix.mixed")).run(movie, source, perturbation)


def canonical_sign(cls: HomClass) -> HomClass:
    """Pick the sign whose first coordinate is positive (symmetric residues over F_p)."""
    coords = cls.coordinate_list()
    if not coords:
        return cls
    K = cls.homology.complex.table.K
    s = coords[0][3]
    negative = s < 0 if K == QQ else K.to_int(s) < 0
    return -cls if negative else cls


def _expected_bigrading(start: KhComplex, x: Chain, spec: CutSpec) -> tuple[int, int]:
    h, q = start.chain_grading(x) or (0, 0)
    dh, dq = spec.whole.expected_shift()
    return h + dh - 1, q + dq
