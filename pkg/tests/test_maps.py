"""Cobordism chain maps, surface statistics and the built-in movies."""

import logging

import pytest
from sympy.polys.domains import QQ

from khmix.core.errors import KhmixError, MoveError
from khmix.services.frobenius import build_table
from khmix.services.khcomplex import build_complex
from khmix.services.khcomplex.matrix import SparseUMatrix
from khmix.services.linkdiag import emit_pd, parse_pd
from khmix.services.mixed import closed_scalar, expected_closed_scalar, induced_sign
from khmix.services.movie import (
    ChainMap,
    Move,
    Movie,
    apply_move,
    builtin_movie,
    candidate_moves,
    compose_movie,
    declared_shift,
    elementary_chain_map,
    grading_audit,
    greedy_normal_euler,
    identity_map,
    inverse_move,
    is_homotopy_equivalence,
    make_rng,
    minimal_model,
    movie_maps,
    random_movie,
    slice_movie,
    surface_stats,
    trefoil_band_moves,
    with_std_crosscap,
    with_star,
    with_std_torus,
)
from khmix.services.movie.library import nine_46, sphere, std_rp2
from khmix.services.movie.maps import MovieCache
from khmix.services.movie.reidemeister import r3_external_crossings
from khmix.services.movie.sweep import external_grading, sweep_around_check

from tests.conftest import corpus_diagram, corpus_movie

logger = logging.getLogger("test-maps")


def _disk(theory="bn"):
    return Movie(start=parse_pd("PD[]"), moves=(Move.make("birth", face="0"),)).with_theory(theory)


@pytest.mark.parametrize("theory", ["lee", "bn"])
@pytest.mark.parametrize("seed", range(4))
def test_random_movie_maps_are_graded_chain_maps(seed, theory):
    start = corpus_diagram("hopf_pos")
    movie = random_movie(make_rng(seed), 4, start=start, max_crossings=4).with_theory(theory)
    for step, f in zip(movie.steps, movie_maps(movie, log=logger)):
        assert f.is_chain_map(), step.move.text()
        assert f.is_graded()
        assert f.shift == declared_shift(step)
    whole = compose_movie(movie, logger)
    assert grading_audit(whole, surface_stats(movie, logger))


@pytest.mark.parametrize("theory", ["lee", "bn"])
def test_kink_maps_are_homotopy_inverse(theory):
    d = parse_pd("PD[] loops[0] orient[0:+]")
    table = build_table(theory, QQ)
    for twist in "+-":
        step = apply_move(d, Move.make("r1_add", arc=0, side="r", twist=twist))
        back = apply_move(step.after, inverse_move(step))
        source = build_complex(step.before, table, "minus", logger)
        target = build_complex(step.after, table, "minus", logger)
        f = elementary_chain_map(step, source, target, logger)
        g = elementary_chain_map(back, target, source, logger)
        assert is_homotopy_equivalence(f, g, logger)


def test_trefoil_reidemeister_maps_induce_isomorphisms():
    d = corpus_diagram("trefoil")
    table = build_table("bn", QQ)
    source = build_complex(d, table, "minus", logger)
    step = apply_move(d, Move.make("r1_add", arc=1, side="l", twist="-"))
    back = apply_move(step.after, inverse_move(step))
    target = build_complex(step.after, table, "minus", logger)
    f = elementary_chain_map(step, source, target, logger)
    g = elementary_chain_map(back, target, source, logger)
    assert induced_sign(f.then(g), identity_map(source), logger) is not None


def test_sphere_and_torus_values():
    table = build_table("bn", QQ)
    assert closed_scalar(sphere(), logger).is_zero()
    torus = corpus_movie("torus")
    value = closed_scalar(torus, logger)
    assert value == table.poly(2) or value == -table.poly(2)
    st = surface_stats(torus, logger)
    assert (st.euler_char, st.normal_euler, st.orientable) == (0, 0, True)
    assert st.components[0].genus == 1
    assert value == expected_closed_scalar(table, st.components[0]) or value == -expected_closed_scalar(
        table, st.components[0]
    )


def test_lee_torus_value():
    value = closed_scalar(corpus_movie("torus").with_theory("lee"), logger)
    two = build_table("lee", QQ).poly(2)
    assert value == two or value == -two


def test_projective_planes():
    rp2 = std_rp2()
    st = surface_stats(rp2, logger)
    assert (st.euler_char, st.normal_euler, st.crosscap) == (1, -2, 1)
    assert not st.orientable
    assert surface_stats(std_rp2(1), logger).normal_euler == 2
    assert closed_scalar(rp2, logger).is_zero()
    assert grading_audit(compose_movie(rp2, logger), st)


def test_klein_bottle():
    movie = builtin_movie("klein")
    st = surface_stats(movie, logger)
    assert (st.euler_char, st.normal_euler, st.crosscap) == (0, 0, 2)
    assert closed_scalar(movie, logger).is_zero()


def test_recorded_and_greedy_normal_euler_agree_on_crosscaps():
    for sign in (-1, 1):
        movie = with_std_crosscap(_disk(), 0, sign)
        assert surface_stats(movie).normal_euler == 2 * sign
        assert greedy_normal_euler(movie) == 2 * sign


def test_trefoil_band():
    moves = trefoil_band_moves(parse_pd("PD[]"))
    band = Movie(start=parse_pd("PD[]"), moves=tuple(moves))
    st = surface_stats(band, logger)
    assert (st.euler_char, st.normal_euler, st.crosscap) == (0, -6, 1)
    assert len(band.end.crossings) == 3
    assert abs(band.end.writhe()) == 3
    with pytest.raises(MoveError):
        trefoil_band_moves(parse_pd("PD[]"), normal_euler=5)


@pytest.mark.slow
def test_trefoil_triple_topology():
    movie = builtin_movie("trefoil_triple")
    st = surface_stats(movie, logger)
    assert st.crosscap == 3
    assert st.normal_euler == -18
    assert len(movie.end.component_ids) == 1
    assert len(movie.end.crossings) == 9
    mirror = builtin_movie("trefoil_triple_mirror")
    assert surface_stats(mirror, logger).normal_euler == 18
    assert emit_pd(mirror.end) == emit_pd(movie.end.mirror())


def test_unknown_builtin():
    with pytest.raises(KhmixError):
        builtin_movie("boy_surface")


def test_templates_splice_and_restore():
    disk = _disk()
    starred = with_star(disk, 0)
    assert starred.counts()["star"] == 1
    tubed = with_std_torus(disk, 0)
    st = surface_stats(tubed, logger)
    assert st.components[0].genus == 1
    assert emit_pd(tubed.end) == emit_pd(disk.end)
    early = with_star(sphere(), 0, frame=1)
    assert early.moves[-1].kind == "death"


@pytest.mark.parametrize("theory", ["lee", "bn"])
def test_star_squared_scales_the_disk(theory):
    disk = _disk(theory)
    table = disk.table()
    f = compose_movie(disk, logger)
    twice = compose_movie(with_star(with_star(disk, 0), 0), logger)
    square = table.poly(4, 1) if theory == "lee" else table.poly(1, 2)
    assert twice.matrix == f.matrix.scaled(square)


@pytest.mark.parametrize("side", ["l", "r"])
def test_std_torus_on_a_disk(side):
    disk = _disk()
    tubed = with_std_torus(disk, 0, side)
    assert [m.kind for m in tubed.moves] == ["birth", "saddle", "saddle"]
    assert tubed.end.same_as(disk.end)
    st = surface_stats(tubed, logger)
    assert (st.euler_char, st.orientable, st.components[0].genus) == (-1, True, 1)


@pytest.mark.parametrize("side", ["l", "r"])
@pytest.mark.parametrize("sign", [-1, 1])
def test_crosscap_on_a_parsed_unknot(sign, side):
    unknot = Movie(start=parse_pd("PD[] loops[0] orient[0:+]"))
    movie = with_std_crosscap(unknot, 0, sign, side=side)
    assert [m.kind for m in movie.moves] == ["r1_add", "saddle", "r1_del"]
    assert not movie.end.crossings
    st = surface_stats(movie, logger)
    assert (st.crosscap, st.normal_euler) == (1, 2 * sign)


@pytest.mark.parametrize("theory", ["lee", "bn"])
def test_minimal_model_is_a_retract(theory):
    c = build_complex(corpus_diagram("trefoil"), build_table(theory, QQ), "minus", logger)
    model = minimal_model(c, logger)
    include = ChainMap(model.complex, c, model.include, (0, 0))
    project = ChainMap(c, model.complex, model.project, (0, 0))
    assert include.is_chain_map()
    assert project.is_chain_map()
    assert model.project @ model.include == SparseUMatrix.identity(len(model.complex), c.table.c(1))
    assert len(model.complex) < len(c)
    assert model.complex.differential.specialize_zero().is_zero()


def _riii_step():
    d = corpus_diagram("trefoil")
    for m in candidate_moves(d, ("r2_add",), max_crossings=5):
        try:
            pushed = apply_move(d, m).after
        except MoveError:
            continue
        for r in candidate_moves(pushed, ("r3",)):
            try:
                return apply_move(pushed, r)
            except MoveError:
                continue
    raise AssertionError("no RIII triangle after a finger move on the trefoil")


@pytest.mark.parametrize("theory", ["lee", "bn"])
@pytest.mark.parametrize("strand", ["over", "under"])
def test_riii_maps_never_raise_the_external_grading(theory, strand):
    step = _riii_step()
    table = build_table(theory, QQ)
    source = build_complex(step.before, table, "minus", logger)
    target = build_complex(step.after, table, "minus", logger)
    f = elementary_chain_map(step, source, target, logger)
    report = sweep_around_check(step, f, strand, logger)
    assert report.passed, report
    assert len(set(report.external_before)) == 2
    assert set(report.external_before) <= set(step.local_before)
    assert set(report.external_after) <= set(step.local_after)
    g = report.representative
    ext_s = external_grading(source, report.external_before)
    ext_t = external_grading(target, report.external_after)
    assert all(ext_t[t] <= ext_s[s] for t, s, _ in g.entries())
    assert ChainMap(source, target, g, f.shift).is_chain_map()


def test_external_crossings_need_an_riii_step():
    step = apply_move(parse_pd("PD[] loops[0] orient[0:+]"), Move.make("r1_add", arc=0, side="r", twist="+"))
    with pytest.raises(MoveError):
        r3_external_crossings(step, False)


@pytest.mark.parametrize(
    "name, theory, coefficient, exponent",
    [
        ("genus2", "bn", 0, 0),
        ("genus2", "lee", 0, 0),
        ("genus3", "bn", 2, 2),
        ("genus3", "lee", 8, 1),
    ],
)
def test_closed_genus_values(name, theory, coefficient, exponent):
    movie = builtin_movie(name).with_theory(theory)
    table = movie.table()
    st = surface_stats(movie, logger)
    assert st.components[0].genus == int(name[-1])
    assert st.euler_char == 2 - 2 * int(name[-1])
    value = closed_scalar(movie, logger)
    want = table.poly(coefficient, exponent) if coefficient else table.poly(0)
    assert value == want or value == -want
    assert value == expected_closed_scalar(table, st.components[0]) or value == -expected_closed_scalar(
        table, st.components[0]
    )


@pytest.mark.parametrize("name, normal_euler", [("rp2_triple", -6), ("rp2_triple_mixed", -2)])
def test_closed_crosscap_three_movies(name, normal_euler):
    movie = builtin_movie(name)
    st = surface_stats(movie, logger)
    assert (st.euler_char, st.normal_euler, st.crosscap) == (-1, normal_euler, 3)
    assert len(st.components) == 1
    assert movie.cut == 4
    assert closed_scalar(movie, logger).is_zero()


def test_nine_46_trims():
    p, trims = nine_46()
    assert len(p.diagram.crossings) == 9
    st = surface_stats(trims, logger)
    assert (st.euler_char, st.normal_euler, st.crosscap) == (-3, -6, 3)
    assert trims.end.writhe() == 0


@pytest.mark.parametrize("side", ["left", "right"])
def test_sundberg_swann_movies(side):
    movie = builtin_movie(f"sundberg_swann_{side}")
    assert not movie.start.arcs
    assert len(movie.end.crossings) == 6
    st = surface_stats(movie, logger)
    assert (st.euler_char, st.normal_euler, st.crosscap) == (-2, -6, 3)
    # the cut sits after the first trim: disk moves, then a saddle and an RI deletion
    assert movie.moves[movie.cut - 2].kind == "saddle"
    assert movie.moves[movie.cut - 1].kind == "r1_del"
    assert len(movie.frames[movie.cut].crossings) == 8


def test_sundberg_swann_disks_differ():
    left, right = builtin_movie("sundberg_swann_left"), builtin_movie("sundberg_swann_right")
    assert [m.text() for m in left.exact_moves()] != [m.text() for m in right.exact_moves()]


@pytest.mark.slow
def test_spun_trefoil_is_a_knotted_sphere_with_zero_value():
    movie = builtin_movie("spun_trefoil")
    st = surface_stats(movie, logger)
    assert len(st.components) == 1
    assert st.orientable
    assert st.euler_char == 2
    assert max(len(d.crossings) for d in movie.frames) == 6
    assert closed_scalar(movie, logger).is_zero()


def test_movie_cache_reuses_frames_and_maps():
    cache = MovieCache(logger)
    torus = corpus_movie("torus")
    complexes, maps = cache.movie(torus)
    assert len(cache.maps) == len(torus)
    tail_complexes, tail_maps = cache.movie(slice_movie(torus, 1))
    assert tail_complexes[0] is complexes[1]
    assert all(a is b for a, b in zip(tail_maps, maps[1:]))
    assert len(cache.maps) == len(torus)
