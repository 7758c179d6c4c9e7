"""Seeded verification suites behind the ``verify`` command."""

from khmix.services.verify.suites import SUITES, CaseResult, SuiteResult, VerifyRunner, run_case, run_suite

__all__ = ["SUITES", "CaseResult", "SuiteResult", "VerifyRunner", "run_case", "run_suite"]
