"""Admissible cuts, the mixed invariant and its certificates."""

import logging

import pytest

from khmix.core.errors import CutError, KhmixError
from khmix.services.frobenius import UPoly
from khmix.services.homology import homology
from khmix.services.khcomplex import build_complex
from khmix.services.linkdiag import parse_pd
from khmix.services.mixed import (
    UNIQUE_CROSSCAP,
    MixedInvariant,
    certify_nonzero_via_hat,
    mixed_invariant,
    validate_cut,
)
from khmix.services.mixed.properties import same_class_up_to_sign
from khmix.services.movie import Move, Movie, builtin_movie, with_std_crosscap
from khmix.services.movie.library import sphere

logger = logging.getLogger("test-mixed")


def _klein_with_cut():
    movie = builtin_movie("klein")
    # birth, three crosscap moves | three crosscap moves, death
    return movie.with_moves(movie.moves, cut=4)


def _perturbation(movie):
    c = build_complex(movie.frames[movie.cut], movie.table(), "minus", logger)
    hom = homology(c, logger)
    rep = hom.representative(hom.basis_class("minus", "f", 0))
    inv_u = UPoly.monomial(c.table.c(1), -1)
    return {g: v * inv_u for g, v in rep.items()}


def test_cut_must_exist_and_split_nonorientably():
    with pytest.raises(CutError):
        validate_cut(builtin_movie("klein"), logger)
    disk_then_cap = sphere().with_moves(sphere().moves, cut=1)
    with pytest.raises(CutError, match="orientable"):
        validate_cut(disk_then_cap, logger)


def test_klein_cut_is_admissible_but_cut_dependent():
    spec = validate_cut(_klein_with_cut(), logger)
    assert spec.crosscap_split == (1, 1)
    assert spec.crosscap == 2 < UNIQUE_CROSSCAP
    assert not spec.cut_independent
    assert spec.warnings


@pytest.mark.parametrize("theory", ["lee", "bn"])
def test_klein_mixed_invariant_grading(theory):
    movie = _klein_with_cut().with_theory(theory)
    result = MixedInvariant(logger).run(movie)
    assert result.expected_bigrading == (-1, 0)
    assert result.bigrading in (None, (-1, 0))
    assert result.warnings
    assert result.hred_dim == 0


def test_mixed_invariant_ignores_infty_cycles():
    movie = _klein_with_cut()
    plain = mixed_invariant(movie, log=logger)
    shifted = mixed_invariant(movie, log=logger, perturbation=_perturbation(movie))
    assert same_class_up_to_sign(plain.cls, shifted.cls)


def test_nonempty_source_needs_a_class():
    start = parse_pd("PD[] loops[0] orient[0:+]")
    movie = with_std_crosscap(Movie(start=start), 0, -1)
    movie = with_std_crosscap(movie, movie.end.component_ids[0], 1)
    movie = movie.with_moves(movie.moves, cut=3)
    with pytest.raises(KhmixError, match="source class"):
        mixed_invariant(movie, log=logger)


def test_hat_certificate_of_a_disk_is_nonzero_but_not_a_certificate():
    disk = Movie(start=parse_pd("PD[]"), moves=(Move.make("birth", face="0"),))
    cert = certify_nonzero_via_hat(disk, log=logger)
    assert cert.hat_push
    assert cert.crosscap == 0
    assert not cert.certifies_nonzero


@pytest.mark.slow
def test_trefoil_triple_is_nonzero():
    result = mixed_invariant(builtin_movie("trefoil_triple"), log=logger)
    assert result.cut.crosscap_split == (1, 2)
    assert not result.warnings
    assert not result.zero
    assert result.bigrading == result.expected_bigrading
    assert result.certificate.certifies_nonzero
    assert result.boundary_agrees


@pytest.mark.slow
def test_trefoil_triple_mirror_vanishes():
    result = mixed_invariant(builtin_movie("trefoil_triple_mirror"), log=logger)
    assert result.zero
    assert not result.certificate.hat_push


@pytest.mark.slow
def test_sundberg_swann_left_vanishes():
    result = mixed_invariant(builtin_movie("sundberg_swann_left"), log=logger)
    assert result.cut.crosscap_split == (1, 2)
    assert result.zero
    assert not result.certificate.hat_push


@pytest.mark.slow
def test_sundberg_swann_right_is_the_top_generator():
    movie = builtin_movie("sundberg_swann_right")
    result = mixed_invariant(movie, log=logger)
    assert result.cut.crosscap_split == (1, 2)
    assert not result.zero
    assert result.bigrading == result.expected_bigrading == (2, 7)
    assert result.certificate.certifies_nonzero
    hom = homology(build_complex(movie.end, movie.table(), "minus", logger), logger)
    top = hom.classify({hom.complex.top_generator(): movie.table().poly(1)}, "hat")
    assert same_class_up_to_sign(result.certificate.pushed, top)


@pytest.mark.parametrize("name", ["rp2_triple", "rp2_triple_mixed"])
def test_closed_crosscap_three_surfaces_vanish(name):
    result = mixed_invariant(builtin_movie(name), log=logger)
    assert result.cut.crosscap == 3
    assert result.cut.crosscap_split == (1, 2)
    assert result.zero
