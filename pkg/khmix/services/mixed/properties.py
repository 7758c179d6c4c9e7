"""Identities between cobordism maps and mixed invariants, checked exactly.

Maps are compared on homology (minus and hat flavors) up to one overall
sign; two chain maps inducing the same map need not be chain homotopic over
R[U], so no homotopy is required.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from khmix.core.errors import CutError, KhmixError, SuiteError
from khmix.services.frobenius.algebra import FrobeniusTable, Theory
from khmix.services.frobenius.upoly import UPoly
from khmix.services.homology.linalg import solve
from khmix.services.homology.module import HomClass, KhHomology, chain_window, homology
from khmix.services.homology.orientation import orientation_generators
from khmix.services.khcomplex.complex import build_complex
from khmix.services.khcomplex.duality import MirrorDual, mirror_dual
from khmix.services.khcomplex.matrix import Chain
from khmix.services.linkdiag.diagram import PlanarDiagram
from khmix.services.mixed.invariant import MixedInvariant, MixedResult
from khmix.services.movie.algebra import dual_movie, slice_movie
from khmix.services.movie.homotopy import Homotopy, find_homotopy, minimal_model, verify_homotopy
from khmix.services.movie.library import sphere
from khmix.services.movie.maps import ChainMap, compose, compose_movie, elementary_chain_map, identity_map
from khmix.services.movie.movie import Movie
from khmix.services.movie.moves import Move, apply_move
from khmix.services.movie.stats import ComponentStats, SurfaceStats, surface_stats
from khmix.services.movie.templates import (
    with_connect_sum,
    with_star,
    with_std_crosscap,
    with_std_torus,
)

logger = logging.getLogger("khmix.mixed")

PROPERTY_KINDS = (
    "neck_cut",
    "star_relations",
    "closed_surface",
    "stabilization_vanishing",
    "crosscap_stab_vanishing",
    "sphere_sum_invariance",
    "composition",
    "mirror_duality",
    "simple_vanishing",
    "cc3_closed_constraints",
    "infty_correspondence",
)


@dataclass
class Check:
    name: str
    passed: bool
    witness: str = ""


@dataclass
class PropertyReport:
    kind: str
    subject: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, witness: str = "") -> None:
        self.checks.append(Check(name, bool(passed), witness))

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "subject": self.subject,
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness} for c in self.checks],
        }


# ----------------------- Homology-level comparisons -----------------------


def induced_sign(f: ChainMap, g: ChainMap, log: logging.Logger | None = None) -> int | None:
    """+1 or -1 when f and g induce ±the same map on minus and hat homology, else None."""
    log = log or logger
    hs, ht = homology(f.source, log), homology(f.target, log)
    signs = {1, -1}
    for a, b in _images(f, g, hs, ht):
        if 1 in signs and not a.equals(b):
            signs.discard(1)
        if -1 in signs and not a.equals(-b):
            signs.discard(-1)
        if not signs:
            return None
    return max(signs)


def induced_vanishes(f: ChainMap, log: logging.Logger | None = None) -> bool:
    log = log or logger
    hs, ht = homology(f.source, log), homology(f.target, log)
    return all(a.is_zero() for a, _ in _images(f, None, hs, ht))


def closed_scalar(movie: Movie, log: logging.Logger | None = None) -> UPoly:
    """The element of R[U] a closed movie sends 1 to."""
    f = compose_movie(movie, log)
    return f.apply({0: f.source.table.poly(1)}).get(0, UPoly())


def expected_closed_scalar(table: FrobeniusTable, comp: ComponentStats) -> UPoly:
    """Value of a closed connected surface: 0, 2H^(g+s-1) or 2^(g+s) T^((g+s-1)/2)."""
    if not comp.orientable:
        return UPoly()
    n = comp.genus + comp.stars
    if n % 2 == 0:
        return UPoly()
    if table.theory is Theory.LEE:
        return table.poly(2**n, (n - 1) // 2)
    return table.poly(2, n - 1)


def star_square(table: FrobeniusTable) -> UPoly:
    """The scalar two stars on one component multiply by: 4T or H^2."""
    return table.poly(4, 1) if table.theory is Theory.LEE else table.poly(1, 2)


def same_class_up_to_sign(a: HomClass, b: HomClass) -> bool:
    """Compare classes computed in separately built homologies of the same diagram."""
    if b.homology is not a.homology:
        b = a.homology.classify(b.homology.representative(b), b.flavor)
    return a.equals_up_to_sign(b)


def plus_image(f: ChainMap, hom_target: KhHomology, cls: HomClass) -> HomClass:
    """The plus-flavor map of ``f`` applied to a plus class."""
    y = chain_window(f.apply(cls.homology.representative(cls)), None, 0)
    return hom_target.classify(y, "plus")


# ----------------------- Suite -----------------------


class PropertySuite:
    """Runs one identity family on a movie and records every check."""

    def __init__(self, logger: logging.Logger, jobs: int = 1):
        self.logger = logger
        self.mixed = MixedInvariant(logger, jobs)
        self.handlers: dict[str, Callable[..., None]] = {
            kind: getattr(self, f"_{kind}") for kind in PROPERTY_KINDS
        }

    # ----------------------- Public API -----------------------

    def run(self, kind: str, movie: Movie, **options: Any) -> PropertyReport:
        if kind not in self.handlers:
            raise SuiteError(f"unknown property kind {kind!r}; expected one of {', '.join(PROPERTY_KINDS)}")
        report = PropertyReport(kind, movie.name or repr(movie))
        try:
            self.handlers[kind](report, movie, **options)
        except KhmixError as exc:
            report.add("computation", False, str(exc))
        self.logger.info(
            "%s on %s: %d/%d checks passed",
            kind,
            report.subject,
            sum(c.passed for c in report.checks),
            len(report.checks),
        )
        return report

    def _compose(self, movie: Movie) -> ChainMap:
        complexes, maps = self.mixed.cache.movie(movie)
        return compose(maps) if maps else identity_map(complexes[0])

    # ----------------------- Handlers -----------------------

    def _neck_cut(self, report: PropertyReport, movie: Movie, arc: int | None = None,
                  frame: int | None = None, side: str = "l") -> None:
        frame, arc = _site(movie, frame, arc)
        tube = self._compose(with_std_torus(movie, arc, side, frame))
        star = self._compose(with_star(movie, arc, frame))
        sign = induced_sign(tube, star, self.logger)
        report.add("tube_equals_star", sign is not None, f"arc {arc} at frame {frame}, sign {sign}")

    def _star_relations(self, report: PropertyReport, movie: Movie, arc: int | None = None,
                        other: int | None = None) -> None:
        _, arc = _site(movie, None, arc)
        table = movie.table()
        f = self._compose(movie)
        twice = self._compose(with_star(with_star(movie, arc), arc))
        scaled = f.matrix.scaled(star_square(table))
        report.add("star_twice", twice.matrix == scaled, f"two stars on arc {arc}")

        end = movie.end
        comp = end.component_of[arc]
        cycle = end.component_arcs(comp)
        if other is None and len(cycle) > 1:
            other = end.next_arc_along(arc)
        if other is not None:
            if other not in cycle:
                raise SuiteError(f"arc {other} is not on the component of arc {arc}")
            passed = (cycle.index(other) - cycle.index(arc)) % len(cycle)
            want = -1 if passed % 2 else 1
            h, here, there = _star_homotopy(end, table, arc, other, want, self.logger)
            ok = h is not None and verify_homotopy(here, there, h)
            report.add("star_commute", ok, f"arcs {arc} and {other}, {passed} crossings apart, sign {want}")

        st = surface_stats(movie, self.logger)
        if not st.orientable:
            killed = ChainMap(f.source, f.target, scaled, f.shift, "scaled")
            report.add("annihilated", induced_vanishes(killed, self.logger), "nonorientable surface")

    def _closed_surface(self, report: PropertyReport, movie: Movie) -> None:
        st = surface_stats(movie, self.logger)
        if movie.start.arcs or movie.end.arcs:
            report.add("closed", False, "movie has boundary")
            return
        value = closed_scalar(movie, self.logger)
        if len(st.components) != 1 or st.dots:
            report.add("scalar", True, f"vacuous: {len(st.components)} components, {st.dots} dots")
            return
        want = expected_closed_scalar(movie.table(), st.components[0])
        ok = value == want or value == -want
        report.add("scalar", ok, f"got {value!r}, expected ±{want!r}")

    def _stabilization_vanishing(self, report: PropertyReport, movie: Movie, arc: int | None = None,
                                 frame: int | None = None) -> None:
        frame, arc = _site(movie, frame, arc)
        comp = _component_at(movie, frame, arc)
        if comp.orientable:
            report.add("precondition", True, f"vacuous: arc {arc} lies on an orientable component")
            return
        stab = self._compose(with_std_torus(movie, arc, "l", frame))
        report.add("handle_vanishes", induced_vanishes(stab, self.logger), f"arc {arc} at frame {frame}")
        starred = self._compose(with_star(movie, arc, frame))
        report.add("star_vanishes", induced_vanishes(starred, self.logger), f"arc {arc} at frame {frame}")

    def _crosscap_stab_vanishing(self, report: PropertyReport, movie: Movie, arc: int | None = None,
                                 frame: int | None = None) -> None:
        frame, arc = _site(movie, frame, arc)
        for sign in (-1, 1):
            f = self._compose(with_std_crosscap(movie, arc, sign, frame))
            report.add(f"crosscap{sign:+d}_vanishes", induced_vanishes(f, self.logger), f"arc {arc}")

    def _sphere_sum_invariance(self, report: PropertyReport, movie: Movie, closed: Movie | None = None,
                               arc: int | None = None, frame: int | None = None) -> None:
        frame, arc = _site(movie, frame, arc)
        closed = (closed or sphere()).with_theory(movie.theory, movie.field_spec)
        summed = self._compose(with_connect_sum(movie, closed, arc, "l", frame))
        est = surface_stats(closed, self.logger)
        if len(est.components) != 1:
            report.add("closed_connected", False, f"{len(est.components)} components")
            return
        e = est.components[0]
        table = movie.table()
        if not e.orientable:
            report.add("nonorientable_sum_vanishes", induced_vanishes(summed, self.logger), closed.name)
            return
        g = e.genus
        base = with_star(movie, arc, frame) if g % 2 else movie
        f = self._compose(base)
        scale = table.poly(1)
        for _ in range(g // 2):
            scale = scale * star_square(table)
        expected = ChainMap(f.source, f.target, f.matrix.scaled(scale), summed.shift, "expected")
        sign = induced_sign(summed, expected, self.logger)
        report.add("sum_matches", sign is not None, f"genus {g} summand {closed.name!r}, sign {sign}")

    def _composition(self, report: PropertyReport, movie: Movie, frame: int | None = None) -> None:
        whole = self.mixed.run(movie)
        cut = whole.cut.frame
        frames = [frame] if frame is not None else [k for k in (1, len(movie) - 1) if 0 < k < len(movie)]
        for k in frames:
            try:
                if k > cut:
                    self._post_composition(report, movie, whole, k)
                elif k < cut:
                    self._pre_composition(report, movie, whole, k)
            except CutError as exc:
                report.add("composition", True, f"vacuous at frame {k}: {exc}")
        if whole.cut.crosscap >= 3:
            _annihilation(report, whole, movie.table())

    def _post_composition(self, report: PropertyReport, movie: Movie, whole: MixedResult, k: int) -> None:
        inner = _with_cut(slice_movie(movie, 0, k), whole.cut.frame)
        outer = self._compose(slice_movie(movie, k))
        inner_cls = self.mixed.run(inner).cls
        pushed = plus_image(outer, whole.cls.homology, inner_cls)
        report.add("post_composition", same_class_up_to_sign(whole.cls, pushed), f"split at frame {k}")

    def _pre_composition(self, report: PropertyReport, movie: Movie, whole: MixedResult, k: int) -> None:
        if movie.start.arcs:
            report.add("pre_composition", True, "vacuous: nonempty source link")
            return
        before = self._compose(slice_movie(movie, 0, k))
        after = _with_cut(slice_movie(movie, k), whole.cut.frame - k)
        x = before.apply({0: before.source.table.poly(1)})
        cls = self.mixed.run(after, x).cls
        report.add("pre_composition", same_class_up_to_sign(whole.cls, cls), f"split at frame {k}")

    def _mirror_duality(self, report: PropertyReport, movie: Movie) -> None:
        f = self._compose(movie)
        g = self._compose(dual_movie(movie))
        d0, d1 = mirror_dual(f.source, self.logger), mirror_dual(f.target, self.logger)
        if not (_same(d1.target.diagram, g.source.diagram) and _same(d0.target.diagram, g.target.diagram)):
            report.add("frames", False, "the dual movie does not run between the mirrored frames")
            return
        for name, dual in (("source", d0), ("target", d1)):
            report.add(f"{name}_duality", dual.is_chain_isomorphism(), f"{len(dual.perm)} generators")
        sign, witness = _pairing_sign(f, g, d0, d1, self.logger)
        report.add("dual_pairing", sign is not None, witness)

    def _simple_vanishing(self, report: PropertyReport, movie: Movie) -> None:
        result = self.mixed.run(movie)
        if result.hred_dim:
            report.add("hred_vanishes", True, f"vacuous: H^red of the cut has dimension {result.hred_dim}")
            return
        report.add("mixed_vanishes", result.zero, f"{result.cls!r}")

    def _cc3_closed_constraints(self, report: PropertyReport, movie: Movie) -> None:
        result = self.mixed.run(movie)
        st = result.cut.whole
        if st.crosscap < 3 or movie.start.arcs or movie.end.arcs:
            report.add("precondition", True, "vacuous: not a closed surface of crosscap number >= 3")
            return
        allowed = _cc3_allowed(st)
        report.add("constraints", allowed or result.zero, f"e={st.normal_euler} chi={st.euler_char}")
        if len(st.components) == 1:
            report.add("connected_vanishes", result.zero, f"{result.cls!r}")
        _annihilation(report, result, movie.table())

    def _infty_correspondence(self, report: PropertyReport, movie: Movie) -> None:
        f = self._compose(movie)
        st = surface_stats(movie, self.logger)
        hs, ht = homology(f.source, self.logger), homology(f.target, self.logger)
        sources = orientation_generators(movie.start, hs, self.logger)
        targets = {gen.reversed: gen.cls for gen in orientation_generators(movie.end, ht, self.logger)}
        for gen in sources:
            image = ht.classify(f.apply(gen.chain), "infty")
            label = f"orientation {sorted(gen.reversed)}"
            if not st.orientable:
                report.add("vanishes", image.is_zero(), label)
                continue
            allowed = [targets[end] for start, end in st.orientation_pairs if start == gen.reversed]
            if not allowed:
                report.add("incompatible_vanishes", image.is_zero(), label)
                continue
            report.add("in_span", _in_span(image, allowed), label)
            if all(c.boundary_start for c in st.components):
                report.add("nonzero", not image.is_zero(), label)


def property_suite(kind: str, movie: Movie, log: logging.Logger | None = None, **options: Any) -> PropertyReport:
    return PropertySuite(log or logger).run(kind, movie, **options)


# ----------------------- Internal helpers -----------------------


def _site(movie: Movie, frame: int | None, arc: int | None) -> tuple[int, int]:
    frame = len(movie) if frame is None else frame
    d = movie.frames[frame]
    if arc is None:
        if not d.arcs:
            raise KhmixError(f"frame {frame} of {movie!r} is empty")
        arc = min(d.arcs)
    return frame, arc


def _component_at(movie: Movie, frame: int, arc: int) -> ComponentStats:
    node = (frame, movie.frames[frame].component_of[arc])
    st = surface_stats(movie)
    return next(c for c in st.components if node in c.nodes)


def _with_cut(movie: Movie, cut: int) -> Movie:
    return movie.with_moves(movie.moves, cut=cut)


def _same(a: PlanarDiagram, b: PlanarDiagram) -> bool:
    return a.same_as(b)


def _images(f: ChainMap, g: ChainMap | None, hs: KhHomology, ht: KhHomology):
    """(f(x), g(x)) for a generating set x of minus and hat homology."""
    f_hat = f.hat()
    g_hat = g.hat() if g is not None else None
    for i in range(len(hs.free)):
        yield _minus_pair(f, g, hs, ht, hs.basis_class("minus", "f", i))
    for i in range(len(hs.torsion)):
        yield _minus_pair(f, g, hs, ht, hs.basis_class("minus", "c", i))
    for x in hs.basis_classes("hat"):
        rep = hs.representative(x)
        a = ht.classify(chain_window(f_hat.apply(rep), 0, 1), "hat")
        b = ht.classify(chain_window(g_hat.apply(rep), 0, 1), "hat") if g_hat else ht.zero("hat")
        yield a, b


def _minus_pair(f, g, hs, ht, x):
    rep = hs.representative(x)
    a = ht.classify(f.apply(rep), "minus")
    b = ht.classify(g.apply(rep), "minus") if g is not None else ht.zero("minus")
    return a, b


def _pairing(dual: MirrorDual, x: Chain, y: Chain):
    """Sum of sign · x_i[n] · y_j[-n-1] over the transported dual pairs."""
    K = dual.source.table.K
    total = K.zero
    for i, coef in x.items():
        yj = y.get(dual.perm[i])
        if not yj:
            continue
        for stored, s in coef.items():
            n = coef.real_exp(stored)
            if n.denominator != 1 or n < 0:
                continue
            _, m, sign = dual.transport(i, int(n))
            t = yj.coeff(2 * m if yj.half else m)
            if t is not None:
                total += s * t * K.convert(sign)
    return total


def _pairing_sign(f: ChainMap, g: ChainMap, d0: MirrorDual, d1: MirrorDual, log: logging.Logger):
    """Compare <f x, y> with <x, g y> for minus cycles x of the source and plus cycles y of the dual."""
    h0 = homology(f.source, log)
    hm = homology(g.source, log)
    depth = 1 + max(hm.dec.max_torsion, h0.dec.max_torsion)
    xs = [h0.representative(h0.basis_class("minus", "f", j)) for j in range(len(h0.free))]
    xs += [h0.representative(h0.basis_class("minus", "c", i)) for i in range(len(h0.torsion))]
    ys = []
    for e in range(1, depth + 1):
        ys += [hm.representative(hm.basis_class("plus", "f", j, -e)) for j in range(len(hm.free))]
        ys += [
            hm.representative(hm.basis_class("plus", "b", i, -e))
            for i, p in enumerate(hm.torsion)
            if e <= p.k
        ]
    signs = {1, -1}
    checked = 0
    for x in xs:
        for k in range(depth + 1):
            xk = {i: v.shift(k * (2 if v.half else 1)) for i, v in x.items()}
            fx = f.apply(xk)
            for y in ys:
                left = _pairing(d1, fx, y)
                right = _pairing(d0, xk, chain_window(g.apply(y), None, 0))
                checked += 1
                if left != right:
                    signs.discard(1)
                if left != -right:
                    signs.discard(-1)
                if not signs:
                    return None, f"pairing differs after {checked} pairs"
    return max(signs), f"{checked} pairs agree with sign {max(signs)}"


def _in_span(image: HomClass, allowed: list[HomClass]) -> bool:
    """Whether a homogeneous infty class is a combination of the allowed generators."""
    if image.is_zero():
        return True
    hom = image.homology
    h, q = image.grading
    u = hom.complex.u_qdeg
    columns = []
    index: dict[tuple, int] = {}

    def vec(cls: HomClass) -> dict[int, Any]:
        out = {}
        for kind, idx, exp, s in cls.coordinate_list():
            out[index.setdefault((kind, idx, Fraction(exp)), len(index))] = s
        return out

    for gen in allowed:
        gh, gq = gen.grading
        if gh != h:
            continue
        m = Fraction(q - gq, u)
        if m.denominator not in (1, 2):
            continue
        half = m.denominator == 2
        shifted = gen.scaled(UPoly.monomial(hom.one, int(m * 2) if half else int(m), half=half))
        columns.append(vec(shifted))
    rhs = vec(image)
    return solve(columns, rhs, len(index), hom.complex.table.K) is not None


def _cc3_allowed(st: SurfaceStats) -> bool:
    """A nonzero closed invariant needs e = -2, no stars on nonorientable parts and chi = 1 + 2 s_o."""
    return (
        st.normal_euler == -2
        and st.stars_nonorientable == 0
        and st.euler_char == 1 + 2 * st.stars_orientable
    )


def _annihilation(report: PropertyReport, result: MixedResult, table: FrobeniusTable) -> None:
    scaled = result.cls.scaled(star_square(table))
    report.add("annihilated", scaled.is_zero(), f"{result.cls!r}")


def _star_homotopy(d: PlanarDiagram, table: FrobeniusTable, arc: int, other: int, sign: int,
                   log: logging.Logger) -> tuple[Homotopy | None, ChainMap, ChainMap]:
    """Stars on two arcs of one component, compared on a minimal model of C(d)."""
    c = build_complex(d, table, "minus", log)
    model = minimal_model(c, log)
    here, there = (
        model.restrict(elementary_chain_map(apply_move(d, Move.make("star", arc=a)), c, c, log))
        for a in (arc, other)
    )
    return find_homotopy(here, there, sign, log), here, there
