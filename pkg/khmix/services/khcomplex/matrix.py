"""Sparse matrices and chains with UPoly entries."""

from __future__ import annotations

from typing import Iterable, Iterator

from khmix.services.frobenius.upoly import UPoly

# A chain is a sparse mapping generator index -> UPoly coefficient.
Chain = dict[int, UPoly]


def chain_add(a: Chain, b: Chain, coef: UPoly | None = None) -> Chain:
    """a + coef·b as a new chain."""
    out = dict(a)
    for i, v in b.items():
        term = v * coef if coef is not None else v
        if i in out:
            s = out[i] + term
            if s:
                out[i] = s
            else:
                del out[i]
        elif term:
            out[i] = term
    return out


def chain_iadd(a: Chain, i: int, term: UPoly) -> None:
    if not term:
        return
    if i in a:
        s = a[i] + term
        if s:
            a[i] = s
        else:
            del a[i]
    else:
        a[i] = term


def chain_scale(a: Chain, coef) -> Chain:
    out = {}
    for i, v in a.items():
        w = v * coef
        if w:
            out[i] = w
    return out


def chain_neg(a: Chain) -> Chain:
    return {i: -v for i, v in a.items()}


def chain_equal(a: Chain, b: Chain) -> bool:
    keys = set(a) | set(b)
    return all((a.get(k) or UPoly()) == (b.get(k) or UPoly()) for k in keys)


def chain_equal_up_to_sign(a: Chain, b: Chain) -> bool:
    return chain_equal(a, b) or chain_equal(a, chain_neg(b))


class SparseUMatrix:
    """Column-major sparse matrix: ``cols[c][r]`` is the entry in row r, column c.

    A matrix maps chains on its columns to chains on its rows. ``shift`` is the
    declared (gr_h, gr_q) change when the matrix is tagged as graded.
    """

    __slots__ = ("n_rows", "n_cols", "cols", "shift")

    def __init__(self, n_rows: int, n_cols: int, shift: tuple[int, int] | None = None):
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.cols: dict[int, Chain] = {}
        self.shift = shift

    @classmethod
    def identity(cls, n: int, one, shift: tuple[int, int] | None = (0, 0)) -> "SparseUMatrix":
        m = cls(n, n, shift)
        for i in range(n):
            m.cols[i] = {i: UPoly.monomial(one)}
        return m

    @classmethod
    def from_columns(
        cls, n_rows: int, columns: Iterable[Chain], shift: tuple[int, int] | None = None
    ) -> "SparseUMatrix":
        cols = list(columns)
        m = cls(n_rows, len(cols), shift)
        for c, col in enumerate(cols):
            if col:
                m.cols[c] = dict(col)
        return m

    # ----------------------- Access -----------------------

    def get(self, r: int, c: int) -> UPoly:
        return self.cols.get(c, {}).get(r) or UPoly()

    def column(self, c: int) -> Chain:
        return self.cols.get(c, {})

    def add(self, r: int, c: int, v: UPoly) -> None:
        if not v:
            return
        col = self.cols.setdefault(c, {})
        chain_iadd(col, r, v)
        if not col:
            del self.cols[c]

    def entries(self) -> Iterator[tuple[int, int, UPoly]]:
        for c in sorted(self.cols):
            col = self.cols[c]
            for r in sorted(col):
                yield r, c, col[r]

    def rows(self) -> dict[int, Chain]:
        out: dict[int, Chain] = {}
        for c, col in self.cols.items():
            for r, v in col.items():
                out.setdefault(r, {})[c] = v
        return out

    @property
    def nnz(self) -> int:
        return sum(len(col) for col in self.cols.values())

    def is_zero(self) -> bool:
        return not any(self.cols.values())

    # ----------------------- Algebra -----------------------

    def apply(self, x: Chain) -> Chain:
        out: Chain = {}
        for c, coef in x.items():
            for r, v in self.cols.get(c, {}).items():
                chain_iadd(out, r, v * coef)
        return out

    def __matmul__(self, other: "SparseUMatrix") -> "SparseUMatrix":
        if self.n_cols != other.n_rows:
            raise ValueError(f"shape mismatch {self.n_cols} vs {other.n_rows}")
        shift = None
        if self.shift is not None and other.shift is not None:
            shift = (self.shift[0] + other.shift[0], self.shift[1] + other.shift[1])
        out = SparseUMatrix(self.n_rows, other.n_cols, shift)
        for c, col in other.cols.items():
            image = self.apply(col)
            if image:
                out.cols[c] = image
        return out

    def __add__(self, other: "SparseUMatrix") -> "SparseUMatrix":
        out = self.copy()
        for r, c, v in other.entries():
            out.add(r, c, v)
        return out

    def __neg__(self) -> "SparseUMatrix":
        out = SparseUMatrix(self.n_rows, self.n_cols, self.shift)
        out.cols = {c: chain_neg(col) for c, col in self.cols.items()}
        return out

    def __sub__(self, other: "SparseUMatrix") -> "SparseUMatrix":
        return self + (-other)

    def scaled(self, coef) -> "SparseUMatrix":
        out = SparseUMatrix(self.n_rows, self.n_cols, self.shift)
        for c, col in self.cols.items():
            col = chain_scale(col, coef)
            if col:
                out.cols[c] = col
        return out

    def copy(self) -> "SparseUMatrix":
        out = SparseUMatrix(self.n_rows, self.n_cols, self.shift)
        out.cols = {c: dict(col) for c, col in self.cols.items()}
        return out

    def transpose(self) -> "SparseUMatrix":
        out = SparseUMatrix(self.n_cols, self.n_rows, self.shift)
        for r, c, v in self.entries():
            out.cols.setdefault(r, {})[c] = v
        return out

    def specialize_zero(self) -> "SparseUMatrix":
        """Set U = 0 in every entry."""
        out = SparseUMatrix(self.n_rows, self.n_cols, self.shift)
        for c, col in self.cols.items():
            kept = {}
            for r, v in col.items():
                w = v.truncate(below=1)
                if w:
                    kept[r] = w
            if kept:
                out.cols[c] = kept
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseUMatrix):
            return NotImplemented
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols):
            return False
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def equals_up_to_sign(self, other: "SparseUMatrix") -> bool:
        return self == other or self == -other

    def __repr__(self) -> str:
        return f"SparseUMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz}, shift={self.shift})"
