"""Movies of elementary cobordisms: the movie language, rewriting, chain maps and surface topology."""

from khmix.services.movie.algebra import (
    concatenate,
    dual_movie,
    halves,
    inverse_move,
    mirror_movie,
    reverse_movie,
    slice_movie,
)
from khmix.services.movie.generate import candidate_moves, make_rng, random_diagram, random_move, random_movie
from khmix.services.movie.homotopy import (
    Homotopy,
    MinimalModel,
    find_homotopy,
    homotopic_up_to_sign,
    is_homotopy_equivalence,
    minimal_model,
    solve_homotopy,
    verify_homotopy,
)
from khmix.services.movie.library import (
    BUILTIN_MOVIES,
    builtin_movie,
    closed_crosscaps,
    closed_genus,
    join_components,
    trefoil_band_moves,
    with_trefoil_band,
)
from khmix.services.movie.ribbon import band_moves, clearing_moves, ribbon_disk, trim_cobordism, trim_moves
from khmix.services.movie.maps import (
    ChainMap,
    compose,
    compose_movie,
    declared_shift,
    elementary_chain_map,
    identity_map,
    movie_complexes,
    movie_maps,
)
from khmix.services.movie.movie import Movie, replay
from khmix.services.movie.moves import MOVE_KINDS, Move, Step, apply_move
from khmix.services.movie.parser import emit_movie, load_movie, parse_move_line, parse_movie
from khmix.services.movie.stats import (
    ComponentStats,
    SurfaceStats,
    grading_audit,
    greedy_normal_euler,
    recorded_normal_euler,
    surface_stats,
)
from khmix.services.movie.sweep import SweepReport, external_grading, sweep_around_check
from khmix.services.movie.templates import (
    crosscap_moves,
    splice,
    with_connect_sum,
    with_dot,
    with_star,
    with_std_crosscap,
    with_std_torus,
    with_tube,
)

__all__ = [
    "MOVE_KINDS",
    "ChainMap",
    "BUILTIN_MOVIES",
    "ComponentStats",
    "Homotopy",
    "MinimalModel",
    "Move",
    "Movie",
    "Step",
    "SurfaceStats",
    "SweepReport",
    "apply_move",
    "band_moves",
    "builtin_movie",
    "candidate_moves",
    "clearing_moves",
    "closed_crosscaps",
    "closed_genus",
    "compose",
    "compose_movie",
    "concatenate",
    "crosscap_moves",
    "declared_shift",
    "dual_movie",
    "elementary_chain_map",
    "emit_movie",
    "external_grading",
    "find_homotopy",
    "grading_audit",
    "greedy_normal_euler",
    "halves",
    "homotopic_up_to_sign",
    "identity_map",
    "inverse_move",
    "is_homotopy_equivalence",
    "join_components",
    "load_movie",
    "make_rng",
    "minimal_model",
    "mirror_movie",
    "movie_complexes",
    "movie_maps",
    "parse_move_line",
    "parse_movie",
    "random_diagram",
    "random_move",
    "random_movie",
    "recorded_normal_euler",
    "replay",
    "reverse_movie",
    "ribbon_disk",
    "slice_movie",
    "solve_homotopy",
    "splice",
    "surface_stats",
    "sweep_around_check",
    "trefoil_band_moves",
    "trim_cobordism",
    "trim_moves",
    "verify_homotopy",
    "with_connect_sum",
    "with_dot",
    "with_star",
    "with_std_crosscap",
    "with_std_torus",
    "with_trefoil_band",
    "with_tube",
]
