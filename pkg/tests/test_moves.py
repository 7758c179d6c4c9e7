"""Elementary moves, the movie language and movie algebra."""

from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from khmix.core.errors import CutError, MoveError, ParseError
from khmix.services.linkdiag import emit_pd, empty_diagram, parse_pd, pretzel
from khmix.services.movie import (
    Move,
    Movie,
    apply_move,
    band_moves,
    clearing_moves,
    concatenate,
    emit_movie,
    halves,
    inverse_move,
    make_rng,
    mirror_movie,
    parse_movie,
    random_movie,
    reverse_movie,
    ribbon_disk,
    slice_movie,
    surface_stats,
    trim_cobordism,
    trim_moves,
)
from khmix.services.movie.generate import candidate_moves
from khmix.services.movie.moves import kink_candidates

from tests.conftest import corpus_diagram, corpus_movie

UNKNOT = "diagram PD[] loops[0] orient[0:+]"


def _frames_text(movie):
    return [emit_pd(d) for d in movie.frames]


def test_birth_and_death():
    born = apply_move(empty_diagram(), Move.make("birth", face="0"))
    (circle,) = born.touched_after
    assert born.after.loops == frozenset({circle})
    assert len(born.after.faces) == 2
    gone = apply_move(born.after, Move.make("death", component=circle))
    assert not gone.after.arcs


def test_kink_twists_have_opposite_writhe():
    d = parse_pd(UNKNOT)
    plus = apply_move(d, Move.make("r1_add", arc=0, side="l", twist="+")).after
    minus = apply_move(d, Move.make("r1_add", arc=0, side="l", twist="-")).after
    assert len(plus.crossings) == len(minus.crossings) == 1
    assert plus.writhe() == -minus.writhe() != 0


def test_move_make_validates_parameters():
    with pytest.raises(ParseError):
        Move.make("flip", arc=0)
    with pytest.raises(ParseError):
        Move.make("r1_add", arc=0, side="l")
    with pytest.raises(ParseError):
        Move.make("death", component=0, face=1)


def test_inapplicable_move_reports_frame():
    movie_text = "\n".join([UNKNOT, "move death component=0", "move death component=0"])
    with pytest.raises(MoveError) as info:
        parse_movie(movie_text)
    assert info.value.frame == 1


@pytest.mark.parametrize("seed", range(6))
def test_every_move_has_an_exact_inverse(seed):
    movie = random_movie(make_rng(seed), 6, start=corpus_diagram("trefoil"), max_crossings=5)
    for step in movie.steps:
        back = apply_move(step.after, inverse_move(step))
        assert back.after.same_as(step.before), step.move.text()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_generated_movies_replay_backwards(seed):
    movie = random_movie(make_rng(seed), 5, max_crossings=4)
    back = reverse_movie(movie)
    assert back.start.same_as(movie.end)
    assert back.end.same_as(movie.start)
    for step in movie.steps:
        assert apply_move(step.after, inverse_move(step)).after.same_as(step.before)


def test_reidemeister_candidates_invert_on_trefoil():
    d = corpus_diagram("trefoil")
    moves = candidate_moves(d, ("r1_add", "r2_add", "r3"), max_crossings=5)
    applied = 0
    for m in moves[:40]:
        try:
            step = apply_move(d, m)
        except MoveError:
            continue
        applied += 1
        assert apply_move(step.after, inverse_move(step)).after.same_as(d)
    assert applied > 0


def test_random_movies_are_seeded():
    a = random_movie(make_rng(11), 5)
    b = random_movie(make_rng(11), 5)
    assert a.moves == b.moves


def test_emit_then_parse_keeps_frames():
    movie = random_movie(make_rng(3), 6, start=corpus_diagram("hopf_pos"), max_crossings=4)
    again = parse_movie(emit_movie(movie))
    assert _frames_text(again) == _frames_text(movie)


def test_parse_movie_header_and_cut():
    text = "\n".join([
        "# a disk",
        "# capped",
        "theory lee",
        "field f7",
        "diagram PD[]",
        "move birth face=0",
        "cut",
        "move death component=0",
    ])
    movie = parse_movie(text, name="disk")
    assert movie.description == "a disk capped"
    assert movie.theory.value == "lee"
    assert movie.field_spec == "f7"
    assert movie.cut == 1
    assert movie.counts() == {"birth": 1, "death": 1}


def test_parse_movie_errors():
    with pytest.raises(ParseError):
        parse_movie("move birth face=0\ndiagram PD[]")
    with pytest.raises(CutError):
        parse_movie("diagram PD[]\ncut\ncut")
    with pytest.raises(ParseError):
        parse_movie("diagram PD[]\nmove birth face")
    with pytest.raises(ParseError):
        parse_movie("diagram PD[]\nreversed\nmove birth face=0")


def test_reversed_block_runs_backwards():
    text = "\n".join([UNKNOT, "reversed", "  move birth face=0", "end", "move death component=0"])
    movie = parse_movie(text)
    assert len(movie.start.loops) == 2
    assert len(movie) == 2
    assert movie.moves[0].kind == "death"
    assert not movie.end.arcs


def test_cut_outside_movie_is_rejected():
    with pytest.raises(CutError):
        Movie(start=empty_diagram(), moves=(Move.make("birth", face="0"),), cut=2)


def test_reverse_and_mirror():
    movie = random_movie(make_rng(5), 5, start=corpus_diagram("trefoil"), max_crossings=5)
    back = reverse_movie(movie)
    assert _frames_text(back) == list(reversed(_frames_text(movie)))
    mirrored = mirror_movie(movie)
    for a, b in zip(movie.frames, mirrored.frames):
        assert b.writhe() == -a.writhe()


def test_slice_concatenate_and_halves():
    movie = corpus_movie("torus")
    first, second = slice_movie(movie, 0, 2), slice_movie(movie, 2)
    joined = concatenate(first, second)
    assert _frames_text(joined) == _frames_text(movie)
    with pytest.raises(CutError):
        halves(movie)
    a, b = halves(movie.with_moves(movie.moves, cut=2))
    assert (len(a), len(b)) == (2, 2)
    with pytest.raises(MoveError):
        concatenate(first, first)


def test_kink_with_outer_monogon_is_not_removable():
    d = parse_pd("PD[X(0,1,1,0;-)]")
    assert kink_candidates(d, 0) == [0, 1]
    outside = replace(d, outer=d.corner_face(0, 1))
    assert kink_candidates(outside, 0) == [0]
    with pytest.raises(MoveError):
        apply_move(outside, Move.make("r1_del", crossing=0, arc=1))
    assert not apply_move(outside, Move.make("r1_del", crossing=0, arc=0)).after.crossings


@pytest.mark.parametrize("orient", ["+", "-"])
def test_merging_two_circles_has_an_exact_inverse(orient):
    d = parse_pd(UNKNOT)
    born = apply_move(d, Move.make("birth", face="0:l", orient=orient))
    (circle,) = born.touched_after
    merge = apply_move(born.after, Move.make("saddle", end1="0:l", end2=f"{circle}:r"))
    assert len(merge.after.component_ids) == 1
    back = inverse_move(merge)
    assert apply_move(merge.after, back).after.same_as(born.after)


def test_incoherent_merge_is_undone_with_one_piece_reversed():
    d = parse_pd(UNKNOT)
    reversals = set()
    for orient in "+-":
        born = apply_move(d, Move.make("birth", face="0:l", orient=orient))
        (circle,) = born.touched_after
        merge = apply_move(born.after, Move.make("saddle", end1="0:l", end2=f"{circle}:r"))
        reversals.add(inverse_move(merge).get("reverse"))
    assert None in reversals
    assert reversals - {None}


def test_saddle_reverse_needs_a_split():
    d = parse_pd(UNKNOT)
    with pytest.raises(MoveError):
        apply_move(d, Move.make("saddle", end1="0:l", end2="0:l", reverse="3"))
    two = apply_move(d, Move.make("saddle", end1="0:l", end2="0:l")).after
    a, b = two.component_ids
    side = next(s for s in "lr" if two.face_of[(b, s)] == two.face_of[(a, "r")])
    with pytest.raises(MoveError):
        apply_move(two, Move.make("saddle", end1=f"{a}:r", end2=f"{b}:{side}", reverse="1"))


def test_clearing_an_unknot_is_one_death():
    moves = clearing_moves(parse_movie(UNKNOT).start)
    assert [m.kind for m in moves] == ["death"]


def test_trefoil_does_not_clear():
    with pytest.raises(MoveError):
        clearing_moves(corpus_diagram("trefoil"))


@pytest.mark.parametrize("left", [0, 1])
def test_ribbon_bands_of_9_46(left):
    p = pretzel(3, -3, 3)
    moves = band_moves(p, left)
    movie = Movie(start=p.diagram, moves=tuple(moves))
    assert moves[0].kind == "saddle"
    assert len(movie.frames[1].components) == 2
    assert not movie.end.arcs
    assert all(m.kind in ("saddle", "r1_del", "r2_del", "r3", "death") for m in moves)


def test_ribbon_disk_ends_on_the_pretzel():
    p = pretzel(3, -3, 3)
    disk = ribbon_disk(p, 0)
    assert not disk.start.arcs
    assert disk.end.same_as(p.diagram)
    st = surface_stats(disk)
    assert len(st.components) == 1
    assert st.components[0].orientable
    assert st.euler_char == 1


def test_trim_smooths_against_the_orientation():
    p = pretzel(3, -3, 3)
    cid = p.columns[2][0]
    moves = trim_moves(p.diagram, cid)
    movie = Movie(start=p.diagram, moves=tuple(moves))
    assert [m.kind for m in moves] == ["saddle", "r1_del"]
    assert cid not in movie.end.crossings
    assert len(movie.end.components) == 1
    assert not surface_stats(movie).orientable


def test_trims_of_a_column_reach_the_connected_sum():
    p = pretzel(3, -3, 3)
    trims = trim_cobordism(p, 2)
    end = trims.end
    assert len(end.crossings) == 6
    assert len(end.components) == 1
    assert end.writhe() == 0
    st = surface_stats(trims)
    assert st.euler_char == -3
    assert st.crosscap == 3
