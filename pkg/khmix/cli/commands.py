"""Command handlers: each takes parsed arguments and returns an exit status."""

from __future__ import annotations

import argparse
import logging
from pathlib import Path

from pydantic import BaseModel

from khmix.core.config import settings
from khmix.core.errors import KhmixError
from khmix.schemas.results import (
    Bigrading,
    CaseFailure,
    Certificates,
    ChainMapOut,
    ClassCoordinate,
    CorpusEntry,
    CorpusListing,
    GradedModuleOut,
    HatEntry,
    HomologyReport,
    MatrixEntry,
    MixedResultOut,
    SuiteReport,
    SurfaceStatsOut,
)
from khmix.services.frobenius.scalars import format_scalar
from khmix.services.homology.module import GradedModule, homology
from khmix.services.khcomplex.complex import build_complex
from khmix.services.linkdiag.parser import emit_pd
from khmix.services.mixed.invariant import MixedInvariant
from khmix.services.movie.library import BUILTIN_MOVIES, builtin_movie
from khmix.services.movie.maps import compose_movie
from khmix.services.movie.movie import Movie
from khmix.services.movie.parser import emit_movie, load_movie
from khmix.services.movie.stats import grading_audit, surface_stats
from khmix.services.verify.suites import SUITES, VerifyRunner

logger = logging.getLogger("khmix.cli")

CORPUS_SUFFIXES = (".mov", ".pd")
FLAVOR_NAMES = ("minus", "hat", "infty", "plus")


# ----------------------- Public API -----------------------


def resolve_input(name: str, corpus: Path | None = None) -> Movie:
    """A file path, a corpus file by stem, or a built-in movie name (with or without ``.mov``)."""
    corpus = Path(corpus or settings.corpus)
    path = Path(name)
    if path.is_file():
        return load_movie(path)
    for suffix in ("",) + CORPUS_SUFFIXES:
        candidate = corpus / f"{name}{suffix}"
        if candidate.is_file():
            return load_movie(candidate)
    builtin = path.stem if path.suffix == ".mov" else name
    if builtin in BUILTIN_MOVIES:
        return builtin_movie(builtin).with_theory(settings.theory, settings.field)
    raise KhmixError(f"no file, corpus entry or built-in movie named {name!r}")


def cmd_kh(args: argparse.Namespace) -> int:
    movie = _with_overrides(resolve_input(args.input), args)
    if not 0 <= args.frame <= len(movie):
        raise KhmixError(f"frame {args.frame} outside 0..{len(movie)}")
    d = movie.frames[args.frame]
    c = build_complex(d, movie.table(), "minus", logger, args.jobs)
    hom = homology(c, logger)
    report = HomologyReport(
        diagram=emit_pd(d),
        theory=movie.theory.value,
        field=movie.field_spec,
        generators=len(c),
        red=GradedModuleOut.from_module(hom.h_red()),
        hat_table=[HatEntry(h=h, q=q, dim=n) for (h, q), n in sorted(hom.hat_dimensions().items())],
        **{flavor: GradedModuleOut.from_module(hom.module(flavor)) for flavor in FLAVOR_NAMES},
    )
    if args.format == "json":
        return _emit(report)
    print(f"{report.diagram}  [{report.theory}, {report.field}, {report.generators} generators]")
    for flavor in FLAVOR_NAMES:
        print(f"  {flavor:5s} {_module_text(hom.module(flavor))}")
    print(f"  red   {_module_text(hom.h_red())}")
    print("  hat table: " + ", ".join(f"({e.h},{e.q}):{e.dim}" for e in report.hat_table))
    return 0


def cmd_map(args: argparse.Namespace) -> int:
    movie = _with_overrides(resolve_input(args.input), args)
    f = compose_movie(movie, logger, args.jobs)
    st = surface_stats(movie, logger)
    K = movie.table().K
    entries = [
        MatrixEntry(row=r, col=c, coefficient=format_scalar(K, coef), u_power=str(v.real_exp(stored)))
        for r, c, v in sorted(f.matrix.entries(), key=lambda e: (e[1], e[0]))
        for stored, coef in v.items()
    ]
    out = ChainMapOut(
        movie=movie.name,
        theory=movie.theory.value,
        field=movie.field_spec,
        source_generators=len(f.source),
        target_generators=len(f.target),
        shift=Bigrading(h=f.shift[0], q=f.shift[1]),
        delta_shift=f.delta_shift,
        entries=entries,
        stats=SurfaceStatsOut.from_stats(st),
        audit=grading_audit(f, st),
    )
    if args.format == "json":
        return _emit(out)
    print(f"{movie!r}: {out.source_generators} -> {out.target_generators} generators, shift {f.shift}")
    print(f"  chi={st.euler_char} e={st.normal_euler} crosscap={st.crosscap} orientable={st.orientable}")
    print(f"  grading audit: {'ok' if out.audit else 'FAILED'}")
    if out.source_generators == out.target_generators == 1:
        print(f"  scalar: {f.matrix.get(0, 0)!r}")
    else:
        print(f"  {len(entries)} nonzero terms")
    return 0


def cmd_mixed(args: argparse.Namespace) -> int:
    movie = _with_overrides(resolve_input(args.input), args)
    result = MixedInvariant(logger, args.jobs).run(movie)
    h, q = result.bigrading or result.expected_bigrading
    out = MixedResultOut(
        movie=movie.name,
        theory=movie.theory.value,
        field=movie.field_spec,
        bigrading=Bigrading(h=h, q=q),
        zero=result.zero,
        coords=[ClassCoordinate(**c) for c in result.coords()],
        certificates=Certificates(**result.certificates()),
        crosscap=result.cut.crosscap,
        crosscap_split=list(result.cut.crosscap_split),
        warnings=result.warnings,
    )
    if args.format == "json":
        return _emit(out)
    state = "zero" if out.zero else "nonzero"
    print(f"{movie!r}: mixed invariant {state} at ({h},{q}), crosscaps {out.crosscap_split}")
    for c in out.coords:
        print(f"  {c.coefficient} U^{c.u_power} {c.kind}{c.index}")
    print(f"  hat push {out.certificates.hat_push}, hat pull {out.certificates.hat_pull}, "
          f"dim H^red {out.certificates.hred_dim}")
    for w in out.warnings:
        print(f"  warning: {w}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    runner = VerifyRunner(
        logger,
        theory=args.theory or settings.theory,
        field=args.field or settings.field,
        jobs=args.jobs,
    )
    result = runner.run(args.suite, args.seed, args.cases)
    report = SuiteReport(
        suite=result.suite,
        seed=result.seed,
        theory=result.theory,
        field=result.field,
        cases=result.cases,
        passed=result.passed,
        failures=[CaseFailure(case=r.index, witness=r.witness, movie=r.movie) for r in result.failures],
    )
    if args.format == "json":
        _emit(report)
    else:
        verdict = "pass" if report.passed else f"FAIL ({len(report.failures)} cases)"
        print(f"verify {report.suite} --seed {report.seed}: {verdict}")
        for fail in report.failures:
            print(f"  case {fail.case}: {fail.witness}")
            if fail.movie:
                print("    " + fail.movie.rstrip().replace("\n", "\n    "))
    return 0 if report.passed else 1


def cmd_corpus_list(args: argparse.Namespace) -> int:
    corpus = Path(settings.corpus)
    entries = []
    if corpus.is_dir():
        for path in sorted(p for p in corpus.iterdir() if p.suffix in CORPUS_SUFFIXES):
            movie = load_movie(path)
            entries.append(_entry(movie, "diagram" if path.suffix == ".pd" else "movie"))
    for name in sorted(BUILTIN_MOVIES):
        entries.append(_entry(builtin_movie(name), "builtin"))
    listing = CorpusListing(corpus=str(corpus), entries=entries)
    if args.format == "json":
        return _emit(listing)
    for e in listing.entries:
        print(f"{e.name:24s} {e.kind:8s} {e.boundary:16s} {e.description}")
    return 0


def cmd_corpus_write(args: argparse.Namespace) -> int:
    """Write built-in movies out as ``.mov`` files."""
    target = Path(args.to or settings.corpus)
    names = args.names or sorted(BUILTIN_MOVIES)
    unknown = [n for n in names if n not in BUILTIN_MOVIES]
    if unknown:
        raise KhmixError(f"no built-in movie named {', '.join(unknown)}")
    target.mkdir(parents=True, exist_ok=True)
    for name in names:
        path = target / f"{name}.mov"
        path.write_text(emit_movie(builtin_movie(name)), encoding="utf-8")
        logger.info("wrote %s", path)
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="khmix", description=__doc__)
    parser.add_argument("--log-level", default=settings.log_level)
    subparsers = parser.add_subparsers(dest="command", required=True)

    kh = subparsers.add_parser("kh", help="homology of a diagram (or of one frame of a movie)")
    kh.add_argument("input")
    kh.add_argument("--frame", type=int, default=0)
    _add_common(kh)
    kh.set_defaults(func=cmd_kh)

    cmap = subparsers.add_parser("map", help="chain map, surface stats and grading audit of a movie")
    cmap.add_argument("input")
    _add_common(cmap)
    cmap.set_defaults(func=cmd_map)

    mixed = subparsers.add_parser("mixed", help="mixed invariant of a movie with a cut")
    mixed.add_argument("input")
    _add_common(mixed)
    mixed.set_defaults(func=cmd_mixed)

    verify = subparsers.add_parser("verify", help="seeded property suites")
    verify.add_argument("suite", choices=sorted(SUITES))
    verify.add_argument("--cases", type=int, default=settings.verify_cases)
    verify.add_argument("--seed", type=int, default=settings.seed)
    _add_common(verify)
    verify.set_defaults(func=cmd_verify)

    corpus = subparsers.add_parser("corpus", help="bundled diagrams and movies")
    corpus_sub = corpus.add_subparsers(dest="corpus_command", required=True)
    listing = corpus_sub.add_parser("list")
    listing.add_argument("--format", choices=("json", "text"), default="text")
    listing.set_defaults(func=cmd_corpus_list)
    write = corpus_sub.add_parser("write", help="write built-in movies as .mov files")
    write.add_argument("names", nargs="*", help="built-in movie names (default: all)")
    write.add_argument("--to", type=Path, default=None, help="target directory (default: the corpus)")
    write.set_defaults(func=cmd_corpus_write)
    return parser


# ----------------------- Internal helpers -----------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    # None leaves the movie header (or KHMIX_THEORY / KHMIX_FIELD) in charge
    p.add_argument("--theory", choices=("lee", "bn"), default=None)
    p.add_argument("--field", default=None, help="q or f<p>")
    p.add_argument("--jobs", type=int, default=settings.jobs, help="worker threads (processes for verify)")
    p.add_argument("--format", choices=("json", "text"), default="json")


def _with_overrides(movie: Movie, args: argparse.Namespace) -> Movie:
    """Flags given on the command line win over the movie's own theory and field lines."""
    if args.theory is None and args.field is None:
        return movie
    return movie.with_theory(args.theory or movie.theory, args.field)


def _emit(model: BaseModel) -> int:
    print(model.model_dump_json(indent=2))
    return 0


def _module_text(m: GradedModule) -> str:
    free = " ".join(f"({h},{q})" for h, q in m.free)
    tors = " ".join(f"({h},{q})/U^{k}" for h, q, k in m.torsion)
    return f"free [{free}] torsion [{tors}]"


def _entry(movie: Movie, kind: str) -> CorpusEntry:
    end = movie.end
    boundary = "empty" if not end.arcs else f"{len(end.component_ids)} comp, {len(end.crossings)} X"
    return CorpusEntry(
        name=movie.name,
        kind=kind,
        theory=movie.theory.value,
        boundary=boundary,
        description=movie.description,
    )
