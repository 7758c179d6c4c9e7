"""Lee and Bar-Natan Frobenius algebras over R[U] with star, dot and the diagonal basis."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from khmix.core.errors import TheoryError
from khmix.services.frobenius.scalars import characteristic
from khmix.services.frobenius.upoly import UPoly

ONE = 0
X = 1
LABEL_NAMES = {ONE: "1", X: "X"}


class Theory(str, Enum):
    LEE = "lee"
    BAR_NATAN = "bn"

    @classmethod
    def parse(cls, text: str) -> "Theory":
        try:
            return cls(text.strip().lower())
        except ValueError as exc:
            raise TheoryError(f"unknown theory {text!r} (expected lee or bn)") from exc


class AlgebraElement:
    """p·1 + q·X with UPoly coefficients."""

    __slots__ = ("theory", "coeffs")

    def __init__(self, theory: Theory, coeffs: dict[int, UPoly]):
        self.theory = theory
        self.coeffs = {lab: c for lab, c in coeffs.items() if c}

    def __getitem__(self, label: int) -> UPoly:
        return self.coeffs.get(label, UPoly())

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_same(self.theory, other.theory)
        out = dict(self.coeffs)
        for lab, c in other.coeffs.items():
            out[lab] = out[lab] + c if lab in out else c
        return AlgebraElement(self.theory, out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + AlgebraElement(other.theory, {lab: -c for lab, c in other.coeffs.items()})

    def scaled(self, c: UPoly) -> "AlgebraElement":
        return AlgebraElement(self.theory, {lab: v * c for lab, v in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement) or other.theory != self.theory:
            return False
        return all(self[lab] == other[lab] for lab in (ONE, X))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        parts = [f"({c})·{LABEL_NAMES[lab]}" for lab, c in sorted(self.coeffs.items())]
        return " + ".join(parts) or "0"


class TensorElement:
    """Element of A ⊗ A as a mapping (label, label) -> UPoly."""

    __slots__ = ("theory", "coeffs")

    def __init__(self, theory: Theory, coeffs: dict[tuple[int, int], UPoly]):
        self.theory = theory
        self.coeffs = {k: c for k, c in coeffs.items() if c}

    def __getitem__(self, key: tuple[int, int]) -> UPoly:
        return self.coeffs.get(key, UPoly())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement) or other.theory != self.theory:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self[k] == other[k] for k in keys)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        parts = [
            f"({c})·{LABEL_NAMES[a]}⊗{LABEL_NAMES[b]}" for (a, b), c in sorted(self.coeffs.items())
        ]
        return " + ".join(parts) or "0"


def _check_same(a: Theory, b: Theory) -> None:
    if a != b:
        raise TheoryError(f"theory mismatch: {a.value} vs {b.value}")


# (target label(s), integer coefficient, U exponent)
Term = tuple[Any, int, int]


@dataclass(frozen=True)
class FrobeniusTable:
    theory: Theory
    K: Any
    u_qdeg: int
    mul_terms: dict[tuple[int, int], tuple[Term, ...]] = field(repr=False)
    comul_terms: dict[int, tuple[Term, ...]] = field(repr=False)
    counit_terms: dict[int, tuple[tuple[int, int], ...]] = field(repr=False)
    star_terms: dict[int, tuple[Term, ...]] = field(repr=False)
    dot_terms: dict[int, tuple[Term, ...]] = field(repr=False)

    # ----------------------- Construction helpers -----------------------

    def c(self, n: int):
        return self.K.convert(n)

    def poly(self, n: int, exp: int = 0) -> UPoly:
        return UPoly.monomial(self.c(n), exp)

    def element(self, one: UPoly | None = None, x: UPoly | None = None) -> AlgebraElement:
        return AlgebraElement(self.theory, {ONE: one or UPoly(), X: x or UPoly()})

    def basis(self, label: int) -> AlgebraElement:
        return AlgebraElement(self.theory, {label: self.poly(1)})

    @property
    def star_qdeg(self) -> int:
        return -2

    # ----------------------- Public API -----------------------

    def unit(self) -> AlgebraElement:
        return self.basis(ONE)

    def multiply(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        self._check(a)
        self._check(b)
        out: dict[int, UPoly] = {}
        for la, ca in a.coeffs.items():
            for lb, cb in b.coeffs.items():
                for lc, n, k in self.mul_terms[(la, lb)]:
                    term = ca * cb * self.poly(n, k)
                    out[lc] = out[lc] + term if lc in out else term
        return AlgebraElement(self.theory, out)

    def comultiply(self, a: AlgebraElement) -> TensorElement:
        self._check(a)
        out: dict[tuple[int, int], UPoly] = {}
        for la, ca in a.coeffs.items():
            for pair, n, k in self.comul_terms[la]:
                term = ca * self.poly(n, k)
                out[pair] = out[pair] + term if pair in out else term
        return TensorElement(self.theory, out)

    def counit(self, a: AlgebraElement) -> UPoly:
        self._check(a)
        out = UPoly()
        for la, ca in a.coeffs.items():
            for n, k in self.counit_terms[la]:
                out = out + ca * self.poly(n, k)
        return out

    def star_op(self, a: AlgebraElement) -> AlgebraElement:
        return self._apply_unary(self.star_terms, a)

    def dot_op(self, a: AlgebraElement) -> AlgebraElement:
        return self._apply_unary(self.dot_terms, a)

    def tensor_multiply(self, t: TensorElement) -> AlgebraElement:
        """m applied to an element of A ⊗ A."""
        out = self.element()
        for (l1, l2), c in t.coeffs.items():
            out = out + self.multiply(self.basis(l1), self.basis(l2)).scaled(c)
        return out

    def diagonal_basis(self, half: bool = False) -> "DiagonalBasis":
        return DiagonalBasis.build(self, half=half)

    # ----------------------- Internal helpers -----------------------

    def _check(self, a: AlgebraElement) -> None:
        _check_same(self.theory, a.theory)

    def _apply_unary(self, table: dict[int, tuple[Term, ...]], a: AlgebraElement) -> AlgebraElement:
        self._check(a)
        out: dict[int, UPoly] = {}
        for la, ca in a.coeffs.items():
            for lc, n, k in table[la]:
                term = ca * self.poly(n, k)
                out[lc] = out[lc] + term if lc in out else term
        return AlgebraElement(self.theory, out)


def build_table(theory: Theory | str, K) -> FrobeniusTable:
    """Structure constants of the Lee (X^2 = T) or Bar-Natan (X^2 = HX) algebra."""
    theory = Theory.parse(theory) if isinstance(theory, str) else theory
    if theory is Theory.LEE:
        if characteristic(K) == 2:
            raise TheoryError("the Lee theory needs 2 to be invertible")
        return FrobeniusTable(
            theory=theory,
            K=K,
            u_qdeg=-4,
            mul_terms={
                (ONE, ONE): ((ONE, 1, 0),),
                (ONE, X): ((X, 1, 0),),
                (X, ONE): ((X, 1, 0),),
                (X, X): ((ONE, 1, 1),),
            },
            comul_terms={
                ONE: (((ONE, X), 1, 0), ((X, ONE), 1, 0)),
                X: (((X, X), 1, 0), ((ONE, ONE), 1, 1)),
            },
            counit_terms={ONE: (), X: ((1, 0),)},
            star_terms={ONE: ((X, 2, 0),), X: ((ONE, 2, 1),)},
            dot_terms={ONE: ((X, 1, 0),), X: ((ONE, 1, 1),)},
        )
    return FrobeniusTable(
        theory=theory,
        K=K,
        u_qdeg=-2,
        mul_terms={
            (ONE, ONE): ((ONE, 1, 0),),
            (ONE, X): ((X, 1, 0),),
            (X, ONE): ((X, 1, 0),),
            (X, X): ((X, 1, 1),),
        },
        comul_terms={
            ONE: (((ONE, X), 1, 0), ((X, ONE), 1, 0), ((ONE, ONE), -1, 1)),
            X: (((X, X), 1, 0),),
        },
        counit_terms={ONE: (), X: ((1, 0),)},
        star_terms={ONE: ((X, 2, 0), (ONE, -1, 1)), X: ((X, 1, 1),)},
        dot_terms={ONE: ((X, 1, 0),), X: ((X, 1, 1),)},
    )


@dataclass(frozen=True)
class DiagonalBasis:
    """The idempotent-like basis A, B with A^2 = cA, B^2 = cB, AB = 0.

    Bar-Natan: A = X, B = H - X, c = H (Laurent in H for the inverse change).
    Lee: A = sqrt(T) + X, B = sqrt(T) - X, c = 2 sqrt(T), which needs half mode.
    """

    table: FrobeniusTable
    half: bool
    a: AlgebraElement
    b: AlgebraElement
    c: UPoly

    @classmethod
    def build(cls, table: FrobeniusTable, half: bool = False) -> "DiagonalBasis":
        one = table.c(1)
        if table.theory is Theory.LEE:
            if not half:
                raise TheoryError("the Lee diagonal basis needs half-power mode (sqrt T)")
            root = UPoly.monomial(one, 1, half=True)
            unit = UPoly.monomial(one, 0, half=True)
            a = table.element(one=root, x=unit)
            b = table.element(one=root, x=-unit)
            return cls(table, True, a, b, root.scale(table.c(2)))
        h = UPoly.monomial(one, 1)
        unit = UPoly.monomial(one, 0)
        a = table.element(x=unit)
        b = table.element(one=h, x=-unit)
        return cls(table, False, a, b, h)

    def to_ab(self, elem: AlgebraElement) -> tuple[UPoly, UPoly]:
        """Coordinates (alpha, beta) with elem = alpha·A + beta·B."""
        p, q = elem[ONE], elem[X]
        if self.table.theory is Theory.LEE:
            p_over = p.promote().shift(-1)
            q = q.promote()
            inv2 = self.table.c(1) / self.table.c(2)
            return (p_over + q).scale(inv2), (p_over - q).scale(inv2)
        p_over = p.shift(-1)
        return q + p_over, p_over

    def from_ab(self, alpha: UPoly, beta: UPoly) -> AlgebraElement:
        return self.a.scaled(alpha) + self.b.scaled(beta)

    def product(self, i: int, j: int) -> tuple[int | None, UPoly]:
        """A=0, B=1: returns (label, coefficient) of the product, label None for zero."""
        if i != j:
            return None, UPoly()
        return i, self.c

    def coproduct(self, i: int) -> tuple[tuple[int, int], UPoly]:
        sign = 1 if i == 0 else -1
        return (i, i), UPoly.monomial(self.table.c(sign), 0, half=self.half)

    def element_of(self, i: int) -> AlgebraElement:
        return self.a if i == 0 else self.b
