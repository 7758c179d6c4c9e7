"""Coefficient fields: parsing field specs and exact scalar serialization."""

from __future__ import annotations

from typing import Any

from sympy import isprime
from sympy.polys.domains import GF, QQ

from khmix.core.errors import TheoryError


def parse_field(spec: str):
    """Turn ``q`` or ``f<p>`` into a sympy domain."""
    spec = spec.strip().lower()
    if spec in ("q", "qq"):
        return QQ
    if spec.startswith("f") and spec[1:].isdigit():
        p = int(spec[1:])
        if not isprime(p):
            raise TheoryError(f"field f{p}: {p} is not prime")
        return GF(p)
    raise TheoryError(f"unknown field spec {spec!r}")


def field_spec(K) -> str:
    if K == QQ:
        return "q"
    return f"f{K.characteristic()}"


def characteristic(K) -> int:
    return int(K.characteristic())


def scalar(K, value: Any):
    """Convert an int (or an element of K) into K."""
    return K.convert(value)


def format_scalar(K, value: Any) -> str:
    if K == QQ:
        num, den = int(K.numer(value)), int(K.denom(value))
        return str(num) if den == 1 else f"{num}/{den}"
    return str(int(K.to_int(value)) % characteristic(K))


def parse_scalar(K, text: str):
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return K.convert(int(num)) / K.convert(int(den))
    return K.convert(int(text))
