"""Seeded verification suites."""

import logging

import pytest

from khmix.core.errors import SuiteError
from khmix.services.verify import SUITES, VerifyRunner, run_suite

logger = logging.getLogger("test-verify")


@pytest.mark.parametrize("suite", ["d2", "chain", "grading", "reidemeister"])
def test_small_suites_pass(suite):
    result = VerifyRunner(logger, theory="bn", field="q", max_crossings=4).run(suite, seed=3, cases=3)
    assert result.cases == 3
    assert len(result.results) == 3
    assert result.passed, result.to_dict()


def test_lee_over_a_prime_field():
    result = run_suite("d2", seed=5, cases=4, log=logger, theory="lee", field="f5")
    assert result.passed, result.to_dict()
    assert result.field == "f5"


def test_outcome_depends_only_on_seed():
    runner = VerifyRunner(logger, max_crossings=4)
    a = runner.run("chain", seed=9, cases=3)
    b = runner.run("chain", seed=9, cases=3)
    assert [(r.passed, r.witness) for r in a.results] == [(r.passed, r.witness) for r in b.results]


@pytest.mark.slow
def test_parallel_run_matches_serial():
    serial = VerifyRunner(logger, jobs=1, max_crossings=4).run("grading", seed=2, cases=4)
    parallel = VerifyRunner(logger, jobs=2, max_crossings=4).run("grading", seed=2, cases=4)
    assert [r.witness for r in serial.results] == [r.witness for r in parallel.results]


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["neckcut", "stars", "crosscap", "closed", "cc3"])
def test_property_suites_pass(suite):
    result = VerifyRunner(logger, max_crossings=3).run(suite, seed=1, cases=2)
    assert result.passed, result.to_dict()


def test_unknown_suite():
    with pytest.raises(SuiteError):
        VerifyRunner(logger).run("everything", seed=1, cases=1)
    assert "d2" in SUITES
