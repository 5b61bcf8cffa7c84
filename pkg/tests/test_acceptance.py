"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one pass/fail line (visible with `pytest -s` or through the
CLI `selftest` subcommand, which runs the same checks).
"""

import pytest

from fock_toeplitz.acceptance import ALL_CHECKS


@pytest.mark.parametrize("check", ALL_CHECKS, ids=lambda c: c.__name__)
def test_acceptance_criterion(check):
    result = check()
    status = "PASS" if result.passed else "FAIL"
    print(f"ACCEPTANCE {result.index:02d} [{status}] {result.name}: {result.detail}")
    assert result.passed, f"criterion {result.index} ({result.name}): {result.detail}"
