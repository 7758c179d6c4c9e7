"""Sparse (Laurent) polynomials in the deformation variable U."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterator, Mapping

from khmix.core.errors import GradingError


class UPoly:
    """Sparse mapping exponent -> scalar with no stored zeros.

    In half mode (``half=True``) exponents are stored doubled, so the key 1
    means U^(1/2). Negative exponents are allowed, which makes the same type
    serve as a Laurent polynomial.
    """

    __slots__ = ("terms", "half")

    def __init__(self, terms: Mapping[int, Any] | None = None, half: bool = False):
        self.terms = {k: c for k, c in (terms or {}).items() if c}
        self.half = half

    @classmethod
    def monomial(cls, coef: Any, exp: int = 0, half: bool = False) -> "UPoly":
        return cls({exp: coef}, half=half)

    @classmethod
    def zero(cls, half: bool = False) -> "UPoly":
        return cls({}, half=half)

    # ----------------------- Inspection -----------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monomial_term(self) -> tuple[int, Any]:
        """Return (stored exponent, coefficient) of a monomial."""
        if len(self.terms) != 1:
            raise GradingError(f"expected a monomial, got {self!r}")
        ((k, c),) = self.terms.items()
        return k, c

    def coeff(self, exp: int) -> Any:
        return self.terms.get(exp)

    def exps(self) -> list[int]:
        return sorted(self.terms)

    def min_exp(self) -> int | None:
        return min(self.terms) if self.terms else None

    def max_exp(self) -> int | None:
        return max(self.terms) if self.terms else None

    def items(self) -> Iterator[tuple[int, Any]]:
        for k in sorted(self.terms):
            yield k, self.terms[k]

    def real_exp(self, stored: int) -> Fraction:
        return Fraction(stored, 2) if self.half else Fraction(stored)

    # ----------------------- Mode handling -----------------------

    def promote(self) -> "UPoly":
        """Return the same polynomial in half mode."""
        if self.half:
            return self
        return UPoly({2 * k: c for k, c in self.terms.items()}, half=True)

    def demote(self) -> "UPoly":
        """Return the integer-mode polynomial; fails on genuine half powers."""
        if not self.half:
            return self
        if any(k % 2 for k in self.terms):
            raise GradingError(f"{self!r} has half-integer exponents")
        return UPoly({k // 2: c for k, c in self.terms.items()})

    @staticmethod
    def _align(a: "UPoly", b: "UPoly") -> tuple["UPoly", "UPoly", bool]:
        if a.half == b.half:
            return a, b, a.half
        return a.promote(), b.promote(), True

    # ----------------------- Arithmetic -----------------------

    def __add__(self, other: "UPoly") -> "UPoly":
        a, b, half = self._align(self, other)
        out = dict(a.terms)
        for k, c in b.terms.items():
            out[k] = out[k] + c if k in out else c
        return UPoly(out, half=half)

    def __sub__(self, other: "UPoly") -> "UPoly":
        return self + (-other)

    def __neg__(self) -> "UPoly":
        return UPoly({k: -c for k, c in self.terms.items()}, half=self.half)

    def __mul__(self, other: Any) -> "UPoly":
        if not isinstance(other, UPoly):
            return self.scale(other)
        a, b, half = self._align(self, other)
        out: dict[int, Any] = {}
        for k1, c1 in a.terms.items():
            for k2, c2 in b.terms.items():
                k = k1 + k2
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return UPoly(out, half=half)

    __rmul__ = __mul__

    def scale(self, c: Any) -> "UPoly":
        if not c:
            return UPoly({}, half=self.half)
        return UPoly({k: v * c for k, v in self.terms.items()}, half=self.half)

    def shift(self, stored: int) -> "UPoly":
        """Multiply by U to the given stored exponent."""
        return UPoly({k + stored: c for k, c in self.terms.items()}, half=self.half)

    def divide_monomial(self, coef: Any, stored: int) -> "UPoly":
        return UPoly({k - stored: c / coef for k, c in self.terms.items()}, half=self.half)

    def truncate(self, below: int | None = None, at_least: int | None = None) -> "UPoly":
        """Keep exponents < below and/or >= at_least (stored units)."""
        out = {}
        for k, c in self.terms.items():
            if below is not None and k >= below:
                continue
            if at_least is not None and k < at_least:
                continue
            out[k] = c
        return UPoly(out, half=self.half)

    def at_zero(self) -> Any:
        """The coefficient of U^0 (None when absent)."""
        return self.terms.get(0)

    # ----------------------- Comparison -----------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UPoly):
            if not self.terms:
                return not other
            return self.terms == {0: other}
        a, b, _ = self._align(self, other)
        return a.terms == b.terms

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            e = self.real_exp(k)
            c = self.terms[k]
            if e == 0:
                parts.append(f"{c}")
            else:
                parts.append(f"{c}*U^{e}" if e.denominator == 1 else f"{c}*U^({e})")
        return " + ".join(parts)
