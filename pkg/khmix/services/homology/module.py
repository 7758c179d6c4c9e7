"""Homology of the four flavors, classes, and the long exact sequence maps.

All flavors are read off one graded decomposition of C^-:

* a free summand f gives R[U] in H^-, R in H-hat (at gr f), R[U, U^-1] in
  H^infty and the tail U^-1 f, U^-2 f, ... in H^+;
* a pair b -> U^k c with k > 0 gives R[U]/U^k at gr c in H^- (this is
  H^red), two classes c and b in H-hat, and R[U]/U^k generated by U^-k b
  in H^+, one step lower in homological grading;
* pairs with k = 0 are contractible.

Class coordinates use the keys ("f", j) for free summands and ("c", i),
("b", i) for the i-th torsion pair.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from khmix.core.config import settings
from khmix.core.errors import GradingError, NotTorsionError, WindowError
from khmix.services.frobenius.upoly import UPoly
from khmix.services.homology import slices
from khmix.services.homology.reduction import Decomposition, Pair, reduce_complex
from khmix.services.khcomplex.complex import KhComplex
from khmix.services.khcomplex.matrix import Chain, chain_iadd

logger = logging.getLogger("khmix.homology")

FLAVORS = ("minus", "hat", "infty", "plus")

LES_MAPS = {
    "pi": ("minus", "hat"),
    "iota": ("hat", "plus"),
    "loc": ("minus", "infty"),
    "proj": ("infty", "plus"),
    "d_plus_hat": ("plus", "hat"),
    "d_hat_minus": ("hat", "minus"),
    "d_plus_minus": ("plus", "minus"),
    "U": (None, None),
}

Key = tuple[str, int]


@dataclass(frozen=True)
class GradedModule:
    """Free and torsion summands with their bigradings.

    For the hat flavor every summand is a copy of the field and sits in
    ``free``; for the plus flavor a free entry is the top U^-1 f of a tail.
    """

    flavor: str
    free: tuple[tuple[int, int], ...]
    torsion: tuple[tuple[int, int, int], ...] = ()

    @property
    def free_rank(self) -> int:
        return len(self.free)

    def dimensions(self) -> dict[tuple[int, int], int]:
        """Field dimension per bigrading (hat flavor, or torsion of minus)."""
        dims: Counter = Counter(self.free)
        return dict(dims)

    def total_dimension(self) -> int:
        return len(self.free) + sum(k for _, _, k in self.torsion)

    def to_dict(self) -> dict[str, Any]:
        return {
            "free": [{"h": h, "q": q} for h, q in self.free],
            "torsion": [{"h": h, "q": q, "k": k} for h, q, k in self.torsion],
        }


@dataclass
class HomClass:
    flavor: str
    coords: dict[Key, UPoly]
    homology: "KhHomology" = field(repr=False, compare=False)

    def __post_init__(self) -> None:
        self.coords = {k: v for k, v in self.coords.items() if v}

    def is_zero(self) -> bool:
        return not self.coords

    def __add__(self, other: "HomClass") -> "HomClass":
        self._check(other)
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = out[k] + v if k in out else v
        return self.homology.reduce(HomClass(self.flavor, out, self.homology))

    def __neg__(self) -> "HomClass":
        return HomClass(self.flavor, {k: -v for k, v in self.coords.items()}, self.homology)

    def __sub__(self, other: "HomClass") -> "HomClass":
        return self + (-other)

    def scaled(self, coef: UPoly) -> "HomClass":
        out = {k: v * coef for k, v in self.coords.items()}
        return self.homology.reduce(HomClass(self.flavor, out, self.homology))

    def equals(self, other: "HomClass") -> bool:
        self._check(other)
        return (self - other).is_zero()

    def equals_up_to_sign(self, other: "HomClass") -> bool:
        return self.equals(other) or self.equals(-other)

    @property
    def grading(self) -> tuple[int, int] | None:
        """Bigrading of a homogeneous class (None for zero)."""
        found = None
        for key, coef in self.coords.items():
            for stored, _ in coef.items():
                here = self.homology.term_grading(self.flavor, key, coef.real_exp(stored))
                if found is None:
                    found = here
                elif found != here:
                    raise GradingError(f"class is not homogeneous: {found} vs {here}")
        if found is None:
            return None
        h, q = found
        if Fraction(q).denominator != 1:
            raise GradingError("class has a fractional quantum grading")
        return h, int(q)

    @property
    def h_grading(self) -> int | None:
        hs = {
            self.homology.term_grading(self.flavor, key, Fraction(0))[0] for key in self.coords
        }
        if len(hs) > 1:
            raise GradingError(f"class spans homological gradings {sorted(hs)}")
        return hs.pop() if hs else None

    def coordinate_list(self) -> list[tuple[str, int, int | Fraction, Any]]:
        """Sorted (kind, index, U exponent, scalar) tuples."""
        out = []
        for (kind, idx), coef in sorted(self.coords.items()):
            for stored, s in coef.items():
                out.append((kind, idx, coef.real_exp(stored), s))
        return out

    def _check(self, other: "HomClass") -> None:
        if other.flavor != self.flavor or other.homology is not self.homology:
            raise GradingError(f"cannot combine {self.flavor} and {other.flavor} classes")

    def __repr__(self) -> str:
        return f"HomClass({self.flavor}, {self.coordinate_list()})"


class KhHomology:
    """All flavors of homology for one complex, built from a single decomposition."""

    def __init__(self, complex: KhComplex, logger: logging.Logger):
        self.complex = complex
        self.logger = logger
        self.dec: Decomposition = reduce_complex(complex, logger)
        self.free = list(self.dec.free)
        self.torsion: list[Pair] = self.dec.torsion
        self.u = complex.u_qdeg
        self.one = complex.table.c(1)
        self.logger.info(
            "homology: %d generators -> %d free, %d torsion (max k=%d)",
            len(complex),
            len(self.free),
            len(self.torsion),
            self.dec.max_torsion,
        )

    # ----------------------- Modules -----------------------

    def module(self, flavor: str) -> GradedModule:
        g = self.complex.grading
        if flavor == "minus":
            return GradedModule(
                "minus",
                tuple(sorted(g(f) for f in self.free)),
                tuple(sorted(g(p.c) + (p.k,) for p in self.torsion)),
            )
        if flavor == "hat":
            grades = [g(f) for f in self.free]
            for p in self.torsion:
                grades.extend([g(p.c), g(p.b)])
            return GradedModule("hat", tuple(sorted(grades)))
        if flavor == "infty":
            return GradedModule("infty", tuple(sorted(g(f) for f in self.free)))
        if flavor == "plus":
            tails = [(g(f)[0], g(f)[1] - self.u) for f in self.free]
            tors = [(g(p.c)[0] - 1, g(p.c)[1], p.k) for p in self.torsion]
            return GradedModule("plus", tuple(sorted(tails)), tuple(sorted(tors)))
        raise GradingError(f"unknown flavor {flavor!r}")

    def h_red(self, convention: str = "sub") -> GradedModule:
        """U-torsion of H^- (``sub``) or the same module as a quotient of H^+ (``quotient``)."""
        g = self.complex.grading
        shift = 0 if convention == "sub" else -1
        tors = tuple(sorted((g(p.c)[0] + shift, g(p.c)[1], p.k) for p in self.torsion))
        return GradedModule("red", (), tors)

    def hat_dimensions(self) -> dict[tuple[int, int], int]:
        return self.module("hat").dimensions()

    def infty_rank(self) -> tuple[int, list[int]]:
        return len(self.free), sorted(self.complex.grading(f)[0] for f in self.free)

    # ----------------------- Classes -----------------------

    def term_grading(self, flavor: str, key: Key, exp) -> tuple[int, Any]:
        kind, idx = key
        if kind == "f":
            base = self.free[idx]
        elif kind == "c":
            base = self.torsion[idx].c
        else:
            base = self.torsion[idx].b
        h, q = self.complex.grading(base)
        return h, q + exp * self.u

    def classify(self, x: Chain, flavor: str) -> HomClass:
        """Class of a cycle of the given flavor (Laurent chains for infty/plus)."""
        if flavor not in FLAVORS:
            raise GradingError(f"unknown flavor {flavor!r}")
        self._check_cycle(x, flavor)
        dec = self.dec
        coords: dict[Key, UPoly] = {}
        if flavor == "hat":
            x = chain_window(x, 0, 1)
        if flavor == "plus":
            x = chain_window(x, None, 0)
        for j, f in enumerate(self.free):
            coords[("f", j)] = dec.coordinate(f, x)
        if flavor in ("minus", "hat"):
            for i, p in enumerate(self.torsion):
                coords[("c", i)] = dec.coordinate(p.c, x)
        if flavor in ("hat", "plus"):
            for i, p in enumerate(self.torsion):
                coords[("b", i)] = dec.coordinate(p.b, x)
        return self.reduce(HomClass(flavor, coords, self))

    def reduce(self, cls: HomClass) -> HomClass:
        """Normal form of the coordinates for the class's flavor."""
        out = {}
        for key, coef in cls.coords.items():
            kind, idx = key
            if cls.flavor == "hat":
                coef = _real_range(coef, 0, 1)
            elif cls.flavor == "minus":
                coef = _real_range(coef, 0, self.torsion[idx].k if kind == "c" else None)
            elif cls.flavor == "plus":
                lo = -self.torsion[idx].k if kind == "b" else None
                coef = _real_range(coef, lo, 0)
            if coef:
                out[key] = coef
        return HomClass(cls.flavor, out, self)

    def representative(self, cls: HomClass) -> Chain:
        out: Chain = {}
        for (kind, idx), coef in cls.coords.items():
            if kind == "f":
                e = self.free[idx]
            elif kind == "c":
                e = self.torsion[idx].c
            else:
                e = self.torsion[idx].b
            for g, v in self.dec.rep_chain(e).items():
                chain_iadd(out, g, v * coef)
        if cls.flavor == "hat":
            out = chain_window(out, 0, 1)
        elif cls.flavor == "plus":
            out = chain_window(out, None, 0)
        return out

    def basis_class(self, flavor: str, kind: str, idx: int, exp: int = 0) -> HomClass:
        return self.reduce(HomClass(flavor, {(kind, idx): UPoly.monomial(self.one, exp)}, self))

    def basis_classes(self, flavor: str) -> list[HomClass]:
        """Field basis of the finite part of a flavor (hat, or H^red in minus)."""
        if flavor == "hat":
            out = [self.basis_class("hat", "f", j) for j in range(len(self.free))]
            for i in range(len(self.torsion)):
                out.append(self.basis_class("hat", "c", i))
                out.append(self.basis_class("hat", "b", i))
            return out
        if flavor == "minus":
            return [
                self.basis_class("minus", "c", i, e)
                for i, p in enumerate(self.torsion)
                for e in range(p.k)
            ]
        raise GradingError(f"no finite basis for flavor {flavor!r}")

    def zero(self, flavor: str) -> HomClass:
        return HomClass(flavor, {}, self)

    # ----------------------- Long exact sequences -----------------------

    def les_map(self, kind: str, x: HomClass) -> HomClass:
        """Evaluate a map of the long exact sequences on chain representatives."""
        if kind not in LES_MAPS:
            raise GradingError(f"unknown long exact sequence map {kind!r}")
        source, target = LES_MAPS[kind]
        if kind == "U":
            target = x.flavor
        elif x.flavor != source:
            raise GradingError(f"{kind} expects a {source} class, got {x.flavor}")
        y = self.representative(x)
        d = self.complex.d
        inv_u = UPoly.monomial(self.one, -1)
        if kind == "U":
            image = _times(y, UPoly.monomial(self.one, 1))
        elif kind in ("pi", "loc", "proj"):
            image = y
        elif kind == "iota":
            image = _times(y, inv_u)
        elif kind == "d_plus_hat":
            image = d(y)
        elif kind == "d_hat_minus":
            image = _times(d(y), inv_u)
        else:
            image = d(y)
        return self.classify(image, target)

    # ----------------------- Plus flavor and primitives -----------------------

    def plus_is_zero(self, y: Chain) -> tuple[bool, HomClass]:
        cls = self.classify(y, "plus")
        return cls.is_zero(), cls

    def plus_window(self, y: Chain) -> int:
        """Pole depth of y plus the largest torsion exponent."""
        return pole_depth(y) + self.dec.max_torsion

    def solve_torsion_primitive(self, z: Chain) -> Chain:
        """A chain of C^infty with boundary z, of minimal pole depth."""
        cls = self.classify(z, "minus")
        if any(kind == "f" for kind, _ in cls.coords):
            raise NotTorsionError("not U-torsion: the class survives in H^infty")
        candidate: Chain = {}
        for p in self.dec.pairs:
            beta = self.dec.coordinate(p.c, z)
            if not beta:
                continue
            coef = beta * UPoly.monomial(self.one, -p.k)
            for g, v in self.dec.rep_chain(p.b).items():
                chain_iadd(candidate, g, v * coef)
        depth = pole_depth(candidate)
        if depth > settings.max_pole_depth:
            raise WindowError(f"primitive needs pole depth {depth} > {settings.max_pole_depth}")
        for bound in range(depth):
            found = slices.solve_bounded(self.complex, z, -bound)
            if found is not None:
                self.logger.debug("primitive found at pole depth %d (decomposition gave %d)", bound, depth)
                return found
        self.logger.debug("primitive at pole depth %d", depth)
        return candidate

    # ----------------------- Internal helpers -----------------------

    def _check_cycle(self, x: Chain, flavor: str) -> None:
        if flavor == "hat":
            dx = chain_window(self.complex.d(chain_window(x, 0, 1)), 0, 1)
        elif flavor == "plus":
            dx = chain_window(self.complex.d(chain_window(x, None, 0)), None, 0)
        else:
            dx = self.complex.d(x)
        if dx:
            raise GradingError(f"not a cycle in the {flavor} flavor")


def homology(c: KhComplex, log: logging.Logger | None = None) -> KhHomology:
    return KhHomology(c, log or logger)


def pole_depth(x: Chain) -> int:
    depth = 0
    for coef in x.values():
        low = coef.min_exp()
        if low is not None:
            e = coef.real_exp(low)
            if e < 0:
                depth = max(depth, int(-(e // 1)))
    return depth


# ----------------------- Module helpers -----------------------


def _real_range(coef: UPoly, lo: int | None, below: int | None) -> UPoly:
    """Keep the terms whose real U exponent e satisfies lo <= e < below."""
    scale = 2 if coef.half else 1
    below = None if below is None else below * scale
    at_least = None if lo is None else lo * scale
    return coef.truncate(below=below, at_least=at_least)


def chain_window(x: Chain, lo: int | None, below: int | None) -> Chain:
    """Terms of x whose real U exponent e satisfies lo <= e < below (the hat window is 0, 1; plus is None, 0)."""
    out = {}
    for g, coef in x.items():
        kept = _real_range(coef, lo, below)
        if kept:
            out[g] = kept
    return out


def _times(x: Chain, coef: UPoly) -> Chain:
    return {g: v * coef for g, v in x.items() if v}
