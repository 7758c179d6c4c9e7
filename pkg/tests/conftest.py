from __future__ import annotations

import logging
from pathlib import Path

import pytest

from khmix.services.linkdiag.diagram import PlanarDiagram
from khmix.services.movie.movie import Movie
from khmix.services.movie.parser import load_movie

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def corpus_movie(name: str) -> Movie:
    for suffix in (".pd", ".mov"):
        path = CORPUS / f"{name}{suffix}"
        if path.is_file():
            return load_movie(path)
    raise FileNotFoundError(name)


def corpus_diagram(name: str) -> PlanarDiagram:
    return corpus_movie(name).start


@pytest.fixture
def logger():
    return logging.getLogger("test-khmix")
