"""Smith normal form of graded matrices over R[U]."""

from __future__ import annotations

from dataclasses import dataclass

from khmix.core.errors import GradingError
from khmix.services.frobenius.upoly import UPoly
from khmix.services.khcomplex.matrix import SparseUMatrix

Rows = dict[int, dict[int, UPoly]]


@dataclass
class SNFResult:
    """P · D · Q = M with D diagonal, entries unit·U^k with k nondecreasing."""

    P: SparseUMatrix
    D: SparseUMatrix
    Q: SparseUMatrix
    diagonal: list[UPoly]

    @property
    def exponents(self) -> list[int]:
        return [d.monomial_term()[0] for d in self.diagonal]


def graded_snf(M: SparseUMatrix, K) -> SNFResult:
    m, n = M.n_rows, M.n_cols
    A: Rows = {}
    for r, c, v in M.entries():
        A.setdefault(r, {})[c] = v
    P: Rows = {i: {i: UPoly.monomial(K.one)} for i in range(m)}
    Q: Rows = {j: {j: UPoly.monomial(K.one)} for j in range(n)}
    diagonal: list[UPoly] = []
    for t in range(min(m, n)):
        pivot = _find_pivot(A, t)
        if pivot is None:
            break
        r, c = pivot
        if r != t:
            A[t], A[r] = A.get(r, {}), A.get(t, {})
            _swap_cols(P, t, r)
        if c != t:
            _swap_cols(A, t, c)
            Q[t], Q[c] = Q.get(c, {}), Q.get(t, {})
        piv = A[t][t]
        stored, coef = piv.monomial_term()
        for i in [i for i in A if i != t and t in A[i]]:
            lam = A[i][t].divide_monomial(coef, stored)
            _add_row(A, i, t, -lam)
            _add_col(P, t, i, lam)
        for j in [j for j in list(A[t]) if j != t]:
            mu = A[t][j].divide_monomial(coef, stored)
            _add_col(A, j, t, -mu)
            _add_row(Q, t, j, mu)
        diagonal.append(piv)
    D = SparseUMatrix(m, n)
    for t, v in enumerate(diagonal):
        D.add(t, t, v)
    return SNFResult(_to_matrix(P, m, m), D, _to_matrix(Q, n, n), diagonal)


# ----------------------- Internal helpers -----------------------


def _find_pivot(A: Rows, t: int) -> tuple[int, int] | None:
    best = None
    for i, row in A.items():
        if i < t:
            continue
        for j, v in row.items():
            if j < t or not v:
                continue
            if not v.is_monomial():
                raise GradingError(f"entry ({i},{j}) = {v!r} is not a monomial; matrix is not graded")
            key = (v.monomial_term()[0], i, j)
            if best is None or key < best:
                best = key
    return None if best is None else (best[1], best[2])


def _add_row(A: Rows, target: int, source: int, coef: UPoly) -> None:
    """row_target += coef · row_source"""
    row = A.setdefault(target, {})
    for j, v in A.get(source, {}).items():
        w = row[j] + v * coef if j in row else v * coef
        if w:
            row[j] = w
        else:
            row.pop(j, None)


def _add_col(A: Rows, target: int, source: int, coef: UPoly) -> None:
    """col_target += coef · col_source"""
    for row in A.values():
        v = row.get(source)
        if v is None:
            continue
        w = row[target] + v * coef if target in row else v * coef
        if w:
            row[target] = w
        else:
            row.pop(target, None)


def _swap_cols(A: Rows, a: int, b: int) -> None:
    for row in A.values():
        va, vb = row.pop(a, None), row.pop(b, None)
        if va is not None:
            row[b] = va
        if vb is not None:
            row[a] = vb


def _to_matrix(A: Rows, m: int, n: int) -> SparseUMatrix:
    out = SparseUMatrix(m, n)
    for i, row in A.items():
        for j, v in row.items():
            out.add(i, j, v)
    return out
