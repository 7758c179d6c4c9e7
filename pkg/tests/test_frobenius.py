"""Frobenius algebras, U-polynomials and field specs."""

import pytest
from hypothesis import given, strategies as st
from sympy.polys.domains import GF, QQ

from khmix.core.errors import GradingError, TheoryError
from khmix.services.frobenius import (
    ONE,
    X,
    Theory,
    UPoly,
    build_table,
    format_scalar,
    parse_field,
    parse_scalar,
)


@pytest.fixture(params=[Theory.LEE, Theory.BAR_NATAN], ids=["lee", "bn"])
def table(request):
    return build_table(request.param, QQ)


def test_x_squared_lee_and_bn():
    lee = build_table("lee", QQ)
    bn = build_table("bn", QQ)
    x_lee, x_bn = lee.basis(X), bn.basis(X)
    assert lee.multiply(x_lee, x_lee) == lee.element(one=lee.poly(1, 1))
    assert bn.multiply(x_bn, x_bn) == bn.element(x=bn.poly(1, 1))


def test_counit(table):
    assert table.counit(table.basis(X)) == table.poly(1)
    assert table.counit(table.basis(ONE)).is_zero()


def test_multiplication_is_associative_and_unital(table):
    labels = (ONE, X)
    unit = table.unit()
    for a in labels:
        ea = table.basis(a)
        assert table.multiply(unit, ea) == ea
        for b in labels:
            for c in labels:
                eb, ec = table.basis(b), table.basis(c)
                left = table.multiply(table.multiply(ea, eb), ec)
                right = table.multiply(ea, table.multiply(eb, ec))
                assert left == right


def test_star_is_multiplication_by_m_delta_one(table):
    handle = table.tensor_multiply(table.comultiply(table.unit()))
    for lab in (ONE, X):
        e = table.basis(lab)
        assert table.star_op(e) == table.multiply(handle, e)


def test_star_squared(table):
    if table.theory is Theory.LEE:
        expected = table.poly(4, 1)
    else:
        expected = table.poly(1, 2)
    for lab in (ONE, X):
        e = table.basis(lab)
        assert table.star_op(table.star_op(e)) == e.scaled(expected)


def test_lee_rejects_characteristic_two():
    with pytest.raises(TheoryError):
        build_table("lee", GF(2))
    build_table("bn", GF(2))


def test_bar_natan_diagonal_basis_is_orthogonal():
    table = build_table("bn", QQ)
    diag = table.diagonal_basis()
    assert table.multiply(diag.a, diag.a) == diag.a.scaled(diag.c)
    assert table.multiply(diag.b, diag.b) == diag.b.scaled(diag.c)
    assert table.multiply(diag.a, diag.b) == table.element()
    alpha, beta = diag.to_ab(table.basis(X))
    assert diag.from_ab(alpha, beta) == table.basis(X)


def test_lee_diagonal_basis_needs_half_mode():
    table = build_table("lee", QQ)
    with pytest.raises(TheoryError):
        table.diagonal_basis()
    diag = table.diagonal_basis(half=True)
    assert table.multiply(diag.a, diag.b) == table.element()
    alpha, beta = diag.to_ab(table.unit())
    assert diag.from_ab(alpha, beta) == table.unit()


def test_theory_parse():
    assert Theory.parse(" BN ") is Theory.BAR_NATAN
    with pytest.raises(TheoryError):
        Theory.parse("khovanov")


def test_field_specs():
    assert parse_field("q") == QQ
    assert parse_field("F7") == GF(7)
    with pytest.raises(TheoryError):
        parse_field("f9")
    with pytest.raises(TheoryError):
        parse_field("r")


def test_scalar_text():
    assert format_scalar(QQ, parse_scalar(QQ, "-3/6")) == "-1/2"
    assert format_scalar(GF(5), parse_scalar(GF(5), "7")) == "2"


def test_half_mode_demote():
    half = UPoly.monomial(QQ(1), 1, half=True)
    with pytest.raises(GradingError):
        half.demote()
    assert (half * half).demote() == UPoly.monomial(QQ(1), 1)


@given(
    st.dictionaries(st.integers(-3, 5), st.integers(-4, 4), max_size=4),
    st.dictionaries(st.integers(-3, 5), st.integers(-4, 4), max_size=4),
)
def test_upoly_ring_laws(a, b):
    p = UPoly({k: QQ(v) for k, v in a.items()})
    q = UPoly({k: QQ(v) for k, v in b.items()})
    assert p * q == q * p
    assert (p + q) - q == p
    assert (p * q).is_zero() == (p.is_zero() or q.is_zero())
