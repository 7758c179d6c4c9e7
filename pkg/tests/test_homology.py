"""Homology of the deformed complexes against known tables and an independent SNF."""

import pytest
from sympy import Symbol, degree
from sympy.polys.domains import QQ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import invariant_factors

from khmix.core.errors import GradingError, NotTorsionError
from khmix.services.frobenius import build_table
from khmix.services.homology import (
    canonical_orientation_generators,
    graded_snf,
    hat_dimensions_by_rank,
    homology,
    plus_is_zero,
    pole_depth,
    solve_torsion_primitive,
)
from khmix.services.homology.slices import plus_zero_by_window
from khmix.services.khcomplex import build_complex, mirror_dual, verify_d_squared
from khmix.services.khcomplex.matrix import chain_equal
from khmix.services.linkdiag import empty_diagram, parse_pd

from tests.conftest import corpus_diagram

SQUARE_KNOT_HAT = {
    (-3, -7): 1,
    (-2, -3): 1,
    (-1, -3): 1,
    (0, -1): 2,
    (0, 1): 2,
    (1, 3): 1,
    (2, 3): 1,
    (3, 7): 1,
}


def _homology(d, theory, logger):
    return homology(build_complex(d, build_table(theory, QQ), "minus", logger), logger)


@pytest.mark.parametrize("theory", ["lee", "bn"])
@pytest.mark.parametrize("name", ["trefoil", "hopf_pos", "hopf_neg", "unknot"])
def test_differential_squares_to_zero(name, theory, logger):
    c = build_complex(corpus_diagram(name), build_table(theory, QQ), "minus", logger)
    assert verify_d_squared(c)
    assert verify_d_squared(c.hat())


@pytest.mark.slow
def test_square_knot_hat_table(logger):
    hom = _homology(corpus_diagram("tref_sum_mirror"), "bn", logger)
    assert hom.hat_dimensions() == SQUARE_KNOT_HAT
    assert hom.module("hat").total_dimension() == 10


@pytest.mark.slow
def test_square_knot_lee(logger):
    hom = _homology(corpus_diagram("tref_sum_mirror"), "lee", logger)
    minus = hom.module("minus")
    assert minus.free_rank == 2
    assert {h for h, _ in minus.free} == {0}
    assert sorted(k for _, _, k in minus.torsion) == [1, 1, 1, 1]
    assert hom.h_red().total_dimension() == 4
    assert hom.hat_dimensions() == SQUARE_KNOT_HAT


@pytest.mark.parametrize("theory", ["lee", "bn"])
def test_hat_decomposition_matches_rank_nullity(theory, logger):
    d = corpus_diagram("trefoil")
    c = build_complex(d, build_table(theory, QQ), "minus", logger)
    assert homology(c, logger).hat_dimensions() == hat_dimensions_by_rank(c)


def test_trefoil_hat_and_mirror(logger):
    right = _homology(corpus_diagram("trefoil"), "bn", logger).hat_dimensions()
    left = _homology(corpus_diagram("trefoil_left"), "bn", logger).hat_dimensions()
    assert sum(right.values()) == 4
    assert left == {(-h, -q): n for (h, q), n in right.items()}


def test_unknot_and_empty(logger):
    unknot = _homology(parse_pd("PD[] loops[0]"), "bn", logger)
    assert unknot.hat_dimensions() == {(0, -1): 1, (0, 1): 1}
    empty = _homology(empty_diagram(), "lee", logger)
    assert empty.module("minus").free == ((0, 0),)
    assert not empty.module("minus").torsion


@pytest.mark.parametrize("theory", ["lee", "bn"])
@pytest.mark.parametrize("name,components", [("trefoil", 1), ("hopf_pos", 2), ("hopf_neg", 2)])
def test_free_rank_counts_orientations(name, components, theory, logger):
    rank, hs = _homology(corpus_diagram(name), theory, logger).infty_rank()
    assert rank == 2**components


def test_hopf_free_part_sits_at_linking_gradings(logger):
    _, hs = _homology(corpus_diagram("hopf_pos"), "lee", logger).infty_rank()
    assert hs == [0, 0, 2, 2]


@pytest.mark.parametrize("theory", ["lee", "bn"])
@pytest.mark.parametrize("name", ["trefoil", pytest.param("tref_sum_mirror", marks=pytest.mark.slow)])
def test_torsion_matches_dense_snf(name, theory, logger):
    c = build_complex(corpus_diagram(name), build_table(theory, QQ), "minus", logger)
    hom = homology(c, logger)
    u = Symbol("U")
    n = len(c)
    rows = [[0] * n for _ in range(n)]
    for r, col, v in c.differential.entries():
        rows[r][col] = sum(QQ.to_sympy(s) * u ** int(v.real_exp(e)) for e, s in v.items())
    factors = invariant_factors(DM(rows, QQ[u]))
    ring = QQ[u]
    exps = sorted(
        degree(ring.to_sympy(f), u) for f in factors if f and degree(ring.to_sympy(f), u) > 0
    )
    assert exps == sorted(p.k for p in hom.torsion)


def test_long_exact_sequence_composites_vanish(logger):
    hom = _homology(corpus_diagram("trefoil"), "bn", logger)
    for j in range(len(hom.free)):
        x = hom.basis_class("minus", "f", j)
        hat = hom.les_map("pi", x)
        assert not hat.is_zero()
        assert hat.grading == x.grading
        assert hom.les_map("pi", hom.les_map("U", x)).is_zero()
        assert hom.les_map("d_hat_minus", hat).is_zero()
    for y in hom.basis_classes("hat"):
        assert hom.les_map("U", hom.les_map("d_hat_minus", y)).is_zero()


def test_les_map_checks_flavor(logger):
    hom = _homology(corpus_diagram("trefoil"), "bn", logger)
    with pytest.raises(GradingError):
        hom.les_map("pi", hom.basis_class("hat", "f", 0))
    with pytest.raises(GradingError):
        hom.les_map("bogus", hom.basis_class("minus", "f", 0))


def test_plus_and_minus_share_torsion(logger):
    hom = _homology(corpus_diagram("trefoil"), "lee", logger)
    minus = hom.module("minus")
    plus = hom.module("plus")
    assert len(plus.torsion) == len(minus.torsion)
    assert [t[2] for t in sorted(plus.torsion)] == [t[2] for t in sorted(minus.torsion)]
    assert hom.h_red("quotient").torsion == tuple(sorted((h - 1, q, k) for h, q, k in minus.torsion))


@pytest.mark.parametrize("theory", ["lee", "bn"])
def test_graded_snf_factors_the_differential(theory, logger):
    c = build_complex(corpus_diagram("trefoil"), build_table(theory, QQ), "minus", logger)
    res = graded_snf(c.differential, c.table.K)
    assert res.P @ res.D @ res.Q == c.differential
    assert res.exponents == sorted(res.exponents)
    assert len(res.diagonal) == res.D.nnz


def test_plus_is_zero_agrees_with_window_search(logger):
    hom = _homology(corpus_diagram("trefoil"), "bn", logger)
    assert hom.torsion
    for i in range(len(hom.torsion)):
        c_rep = hom.representative(hom.basis_class("minus", "c", i))
        bounded = {g: v.shift(-1) for g, v in c_rep.items()}
        survivor = hom.representative(hom.basis_class("plus", "b", i, -1))
        for y, zero in ((bounded, True), (survivor, False)):
            found, cls = plus_is_zero(hom, y)
            assert found is zero
            assert cls.is_zero() is zero
            assert plus_zero_by_window(hom.complex, y, hom.plus_window(y)) is zero


def test_torsion_primitive_bounds_a_torsion_cycle(logger):
    hom = _homology(corpus_diagram("trefoil"), "bn", logger)
    z = hom.representative(hom.basis_class("minus", "c", 0))
    x = solve_torsion_primitive(hom, z)
    assert chain_equal(hom.complex.d(x), z)
    assert pole_depth(x) >= 1


def test_free_cycles_have_no_torsion_primitive(logger):
    hom = _homology(corpus_diagram("trefoil"), "bn", logger)
    z = hom.representative(hom.basis_class("minus", "f", 0))
    with pytest.raises(NotTorsionError):
        solve_torsion_primitive(hom, z)


@pytest.mark.parametrize("theory", ["lee", "bn"])
@pytest.mark.parametrize("name", ["trefoil", "hopf_pos"])
def test_mirror_dual_is_a_chain_isomorphism(name, theory, logger):
    c = build_complex(corpus_diagram(name), build_table(theory, QQ), "minus", logger)
    dual = mirror_dual(c, logger)
    assert sorted(dual.perm) == list(range(len(c)))
    assert dual.target.diagram.writhe() == -c.diagram.writhe()
    assert dual.is_chain_isomorphism()
    target, exp, _ = dual.transport(0, 2)
    assert target == dual.perm[0] and exp == -3


def test_mirror_dual_needs_the_minus_flavor(logger):
    c = build_complex(corpus_diagram("trefoil"), build_table("bn", QQ), "minus", logger)
    with pytest.raises(GradingError):
        mirror_dual(c.hat(), logger)
    with pytest.raises(GradingError):
        mirror_dual(c, logger).transport(0, -1)


def test_orientation_generators_span_the_free_part(logger):
    hom = _homology(corpus_diagram("hopf_pos"), "lee", logger)
    classes = canonical_orientation_generators(corpus_diagram("hopf_pos"), hom)
    _, hs = hom.infty_rank()
    assert len(classes) == 4
    assert sorted(cls.h_grading for cls in classes) == hs
    for i, a in enumerate(classes):
        assert not a.is_zero()
        assert not any(a.equals_up_to_sign(b) for b in classes[i + 1 :])
