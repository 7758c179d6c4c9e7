"""Command-line handlers for kh, map, mixed, verify and corpus."""

from khmix.cli.commands import (
    build_parser,
    cmd_corpus_list,
    cmd_kh,
    cmd_map,
    cmd_mixed,
    cmd_verify,
    resolve_input,
)

__all__ = [
    "build_parser",
    "cmd_corpus_list",
    "cmd_kh",
    "cmd_map",
    "cmd_mixed",
    "cmd_verify",
    "resolve_input",
]
