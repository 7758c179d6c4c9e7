"""Field linear algebra on sparse sympy DomainMatrix objects."""

from __future__ import annotations

from typing import Any, Sequence

from sympy.polys.matrices import DomainMatrix

Vec = dict[int, Any]


def sparse_matrix(columns: Sequence[Vec], n_rows: int, K) -> DomainMatrix:
    """Build a DomainMatrix (sparse format) from column dictionaries."""
    rows: dict[int, dict[int, Any]] = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            if v:
                rows.setdefault(i, {})[j] = K.convert(v)
    return DomainMatrix(rows, (n_rows, len(columns)), K)


def entries(M: DomainMatrix) -> dict[int, dict[int, Any]]:
    """Row dictionaries of a DomainMatrix, zeros dropped."""
    rep = M.to_sparse().rep
    return {i: {j: v for j, v in row.items() if v} for i, row in rep.items()}


def rank(columns: Sequence[Vec], n_rows: int, K) -> int:
    if not columns or not n_rows:
        return 0
    return sparse_matrix(columns, n_rows, K).rank()


def solve(columns: Sequence[Vec], rhs: Vec, n_rows: int, K) -> Vec | None:
    """A particular solution x of A x = rhs (A given by columns), or None."""
    n = len(columns)
    if not rhs:
        return {}
    if not columns:
        return None
    augmented = list(columns) + [rhs]
    R, pivots = sparse_matrix(augmented, n_rows, K).rref()
    if n in pivots:
        return None
    rows = entries(R)
    x: Vec = {}
    for i, p in enumerate(pivots):
        v = rows.get(i, {}).get(n)
        if v:
            x[p] = v
    return x


def kernel(columns: Sequence[Vec], n_rows: int, K) -> list[Vec]:
    """A basis of the null space of A (given by columns)."""
    n = len(columns)
    if n == 0:
        return []
    if n_rows == 0:
        return [{j: K.one} for j in range(n)]
    R, pivots = sparse_matrix(columns, n_rows, K).rref()
    rows = entries(R)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        vec: Vec = {free: K.one}
        for i, p in enumerate(pivots):
            v = rows.get(i, {}).get(free)
            if v:
                vec[p] = -v
        basis.append(vec)
    return basis
