"""Identity families between cobordism maps, run on small movies."""

import logging

import pytest
from sympy.polys.domains import QQ

from khmix.core.errors import SuiteError
from khmix.services.frobenius import build_table
from khmix.services.linkdiag import parse_pd
from khmix.services.mixed import PROPERTY_KINDS, PropertySuite, property_suite
from khmix.services.mixed.properties import _star_homotopy
from khmix.services.movie import Move, Movie, builtin_movie, with_std_crosscap

from tests.conftest import corpus_diagram, corpus_movie

logger = logging.getLogger("test-properties")


def _disk(theory="bn"):
    return Movie(start=parse_pd("PD[]"), moves=(Move.make("birth", face="0"),), name="disk").with_theory(theory)


def _band():
    return with_std_crosscap(_disk(), 0, -1)


@pytest.mark.parametrize("theory", ["lee", "bn"])
@pytest.mark.parametrize(
    "kind",
    ["neck_cut", "star_relations", "crosscap_stab_vanishing", "sphere_sum_invariance", "infty_correspondence"],
)
def test_disk_properties(kind, theory):
    report = property_suite(kind, _disk(theory), logger)
    assert report.checks
    assert report.passed, report.to_dict()


def test_mirror_duality_of_a_disk():
    report = property_suite("mirror_duality", _disk(), logger)
    assert report.passed, report.to_dict()


@pytest.mark.parametrize("kind", ["stabilization_vanishing", "star_relations", "infty_correspondence"])
def test_band_properties(kind):
    report = property_suite(kind, _band(), logger)
    assert report.passed, report.to_dict()


def test_band_star_relations_include_annihilation():
    report = property_suite("star_relations", _band(), logger)
    assert "annihilated" in {c.name for c in report.checks}


def test_closed_surfaces():
    for movie in (corpus_movie("torus"), corpus_movie("sphere"), builtin_movie("klein"), builtin_movie("std_rp2")):
        report = property_suite("closed_surface", movie, logger)
        assert report.passed, report.to_dict()


def test_closed_surface_rejects_boundary():
    report = property_suite("closed_surface", _disk(), logger)
    assert not report.passed


def test_sphere_sum_with_torus():
    report = PropertySuite(logger).run("sphere_sum_invariance", _disk(), closed=corpus_movie("torus"))
    assert report.passed, report.to_dict()


def test_hopf_saddle_infty_correspondence():
    start = corpus_diagram("hopf_pos")
    face = next(f for f in sorted(start.faces) if len({start.component_of[a] for a, _ in start.face_darts(f)}) == 2)
    darts = start.face_darts(face)
    a = darts[0]
    b = next(x for x in darts if start.component_of[x[0]] != start.component_of[a[0]])
    movie = Movie(start=start, moves=(Move.make("saddle", end1=f"{a[0]}:{a[1]}", end2=f"{b[0]}:{b[1]}"),))
    report = property_suite("infty_correspondence", movie, logger)
    assert report.passed, report.to_dict()


def test_simple_vanishing_on_klein():
    movie = builtin_movie("klein")
    movie = movie.with_moves(movie.moves, cut=4)
    report = property_suite("simple_vanishing", movie, logger)
    assert report.passed, report.to_dict()


def test_errors_become_failed_checks():
    report = property_suite("simple_vanishing", _disk(), logger)
    assert not report.passed
    assert report.checks[0].name == "computation"


def test_unknown_kind():
    with pytest.raises(SuiteError):
        property_suite("associativity", _disk(), logger)
    assert len(PROPERTY_KINDS) == len(set(PROPERTY_KINDS))


@pytest.mark.slow
def test_trefoil_triple_composition_and_constraints():
    movie = builtin_movie("trefoil_triple")
    for kind in ("composition", "cc3_closed_constraints"):
        report = property_suite(kind, movie, logger)
        assert report.passed, report.to_dict()


@pytest.mark.parametrize("theory", ["lee", "bn"])
def test_stars_across_one_crossing_differ_by_sign(theory):
    trefoil = Movie(start=corpus_diagram("trefoil"), name="trefoil").with_theory(theory)
    report = property_suite("star_relations", trefoil, logger)
    commute = next(c for c in report.checks if c.name == "star_commute")
    assert commute.passed, commute.witness
    assert commute.witness.endswith("1 crossings apart, sign -1")


def test_stars_two_crossings_apart_agree():
    d = corpus_diagram("trefoil")
    arc = min(d.arcs)
    other = d.next_arc_along(d.next_arc_along(arc))
    report = PropertySuite(logger).run("star_relations", Movie(start=d), arc=arc, other=other)
    assert report.passed, report.to_dict()
    assert "sign 1" in next(c for c in report.checks if c.name == "star_commute").witness


def test_star_homotopy_has_a_definite_sign():
    d = corpus_diagram("trefoil")
    table = build_table("bn", QQ)
    arc = min(d.arcs)
    other = d.next_arc_along(arc)
    assert _star_homotopy(d, table, arc, other, -1, logger)[0] is not None
    assert _star_homotopy(d, table, arc, other, 1, logger)[0] is None


def test_star_relations_need_one_component():
    d = corpus_diagram("hopf_pos")
    arc = min(d.arcs)
    other = next(a for a in d.arcs if d.component_of[a] != d.component_of[arc])
    report = PropertySuite(logger).run("star_relations", Movie(start=d), arc=arc, other=other)
    assert not report.passed


@pytest.mark.parametrize("name", ["genus2", "genus3", "rp2_triple", "rp2_triple_mixed"])
def test_closed_surface_table(name):
    report = property_suite("closed_surface", builtin_movie(name), logger)
    assert report.passed, report.to_dict()
    assert not any("vacuous" in c.witness for c in report.checks)


@pytest.mark.parametrize("name", ["rp2_triple", "rp2_triple_mixed"])
def test_closed_crosscap_constraints_are_checked(name):
    report = property_suite("cc3_closed_constraints", builtin_movie(name), logger)
    assert report.passed, report.to_dict()
    names = {c.name for c in report.checks}
    assert {"constraints", "connected_vanishes"} <= names
    assert "precondition" not in names


@pytest.mark.slow
def test_knotted_sphere_sum_and_value():
    spun = builtin_movie("spun_trefoil")
    closed = property_suite("closed_surface", spun, logger)
    assert closed.passed, closed.to_dict()
    summed = property_suite("sphere_sum_invariance", _disk(), logger, closed=spun)
    assert summed.passed, summed.to_dict()
    assert "sum_matches" in {c.name for c in summed.checks}
