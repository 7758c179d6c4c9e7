"""Planar diagrams: PD text, orientations, resolutions and colorings."""

import pytest

from khmix.core.errors import DiagramError, ParseError
from khmix.services.linkdiag import (
    all_vertices,
    checkerboard,
    emit_pd,
    empty_diagram,
    face_ref,
    parse_dart,
    parse_pd,
    pretzel,
    resolve,
)

from tests.conftest import corpus_diagram

TREFOIL = "PD[X(4,2,5,1;+),X(6,4,1,3;+),X(2,6,3,5;+)]"


def test_trefoil_counts():
    d = parse_pd(TREFOIL)
    assert len(d.crossings) == 3
    assert len(d.components) == 1
    assert len(d.faces) == 5
    assert d.writhe() == 3
    assert d.mirror().writhe() == -3


def test_corpus_trefoils_are_mirror_images():
    right = corpus_diagram("trefoil")
    left = corpus_diagram("trefoil_left")
    assert right.writhe() == 3
    assert left.writhe() == -3


def test_hopf_linking_numbers():
    pos = corpus_diagram("hopf_pos")
    neg = corpus_diagram("hopf_neg")
    assert len(pos.component_ids) == 2
    assert pos.linking_number({pos.component_ids[0]}) == 1
    assert neg.linking_number({neg.component_ids[0]}) == -1


def test_reversing_one_component_negates_linking():
    d = corpus_diagram("hopf_pos")
    first = d.component_ids[0]
    flipped = d.reoriented([first])
    assert flipped.writhe() == -2
    assert flipped.linking_number({first}) == -1


def test_emit_then_parse_rebuilds_diagram():
    for name in ("trefoil", "hopf_neg", "tref_sum_mirror", "unknot"):
        d = corpus_diagram(name)
        assert parse_pd(emit_pd(d)).same_as(d)


def test_empty_and_unknot():
    empty = parse_pd("PD[]")
    assert not empty.arcs
    assert empty.faces == empty_diagram().faces
    unknot = parse_pd("diagram PD[] loops[0] orient[0:+]")
    assert len(unknot.components) == 1
    assert len(unknot.faces) == 2


def test_oriented_resolution_of_positive_trefoil():
    d = parse_pd(TREFOIL)
    assert len(resolve(d, (0, 0, 0))) == 2
    assert len(resolve(d, (1, 1, 1))) == 3
    assert resolve(d, (1, 0, 1)).size == 2


def test_resolve_rejects_bad_vertex():
    d = parse_pd(TREFOIL)
    with pytest.raises(DiagramError):
        resolve(d, (0, 1))
    with pytest.raises(DiagramError):
        resolve(d, (0, 2, 1))


def test_all_vertices_lexicographic():
    assert all_vertices(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_checkerboard_colors_alternate():
    d = corpus_diagram("tref_sum_mirror")
    board = checkerboard(d)
    assert board.face_color(d.outer) == 0
    for arc in d.arcs:
        assert board.face_color(d.face_of[(arc, "l")]) != board.face_color(d.face_of[(arc, "r")])


def test_face_references():
    d = parse_pd(TREFOIL)
    dart = parse_dart(" 4:l ")
    assert dart == (4, "l")
    assert face_ref(d, "4:l") == d.face_of[dart]
    with pytest.raises(DiagramError):
        face_ref(d, "99:l")
    with pytest.raises(ParseError):
        parse_dart("4:x")


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_pd("PD[X(1,2,3;+)]", line=7)
    assert info.value.line == 7
    assert info.value.column > 3


def test_dangling_arc_is_rejected():
    with pytest.raises(DiagramError, match="dangling"):
        parse_pd("PD[X(1,2,3,4;+)]")


def test_trailing_text_is_rejected():
    with pytest.raises(ParseError):
        parse_pd(TREFOIL + " banana")


def _traced_circles(d, vertex):
    ends = {}
    for cid, x in d.crossings.items():
        for slot, arc in enumerate(x.arcs):
            ends.setdefault(arc, []).append((cid, slot))
    bit = dict(zip(d.crossing_ids, vertex))
    seen = set()
    circles = set()
    for start in d.arcs:
        if start in seen:
            continue
        circle = []
        arc = start
        end = ends[start][0] if start in ends else None
        while True:
            seen.add(arc)
            circle.append(arc)
            if end is None:
                break
            cid, slot = end
            partner = slot ^ 1 if bit[cid] == 0 else 3 - slot
            nxt = d.crossings[cid].arcs[partner]
            if nxt in seen:
                break
            end = next(e for e in ends[nxt] if e != (cid, partner))
            arc = nxt
        circles.add(frozenset(circle))
    return circles


@pytest.mark.parametrize("name", ["trefoil", "hopf_neg", "tref_sum_mirror", "unknot"])
def test_resolve_matches_strand_tracing(name):
    d = corpus_diagram(name)
    for vertex in all_vertices(len(d.crossings)):
        r = resolve(d, vertex)
        assert {frozenset(c) for c in r.circles} == _traced_circles(d, vertex)


def test_reversed_components_are_stored_canonically():
    minus = parse_pd("PD[] loops[0] orient[0:-]")
    plus = parse_pd("PD[] loops[0] orient[0:+]")
    assert minus.flip == {0: 0}
    assert minus.same_as(plus.reoriented([0]))
    assert not minus.same_as(plus)
    d = corpus_diagram("hopf_pos")
    flipped = d.reoriented([d.component_ids[0]])
    assert set(flipped.flip.values()) == {0}
    assert flipped.reoriented([d.component_ids[0]]).same_as(d)
    assert flipped.signs != d.signs


@pytest.mark.parametrize(
    "twists, crossings, components, writhe",
    [((1, 1, 1), 3, 1, 3), ((1, 1), 2, 2, 2), ((3, -3, 0), 6, 1, 0), ((3, -3, 3), 9, 1, 3)],
)
def test_pretzel_diagrams(twists, crossings, components, writhe):
    p = pretzel(*twists)
    d = p.diagram
    assert len(d.crossings) == crossings
    assert len(d.components) == components
    assert abs(d.writhe()) == writhe
    # connected projection: V - E + F = 2
    assert len(d.faces) == crossings + 2
    assert p.mirror().diagram.writhe() == -d.writhe()
    assert p.mirror().twists == tuple(-n for n in twists)


def test_pretzel_columns_and_internal_arcs():
    p = pretzel(3, -3, 3)
    assert p.columns == ((0, 1, 2), (3, 4, 5), (6, 7, 8))
    for column in range(3):
        inner = p.internal_arcs(column)
        assert len(inner) == 4
        ids = set(p.columns[column])
        assert all({p.diagram.heads[a][0], p.diagram.tails[a][0]} <= ids for a in inner)
    assert not p.internal_arcs(0) & p.internal_arcs(1)


def test_pretzel_columns_of_one_sign_share_crossing_signs():
    d = pretzel(3, -3, 3).diagram
    signs = [d.signs[cid] for cid in d.crossing_ids]
    assert len(set(signs[0:3])) == len(set(signs[3:6])) == len(set(signs[6:9])) == 1
    assert signs[0] == signs[6] == -signs[3]


@pytest.mark.parametrize("twists", [(3,), (0, 0), ()])
def test_pretzel_rejects_degenerate_columns(twists):
    with pytest.raises(DiagramError):
        pretzel(*twists)
