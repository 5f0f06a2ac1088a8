"""Acceptance gate: one test per criterion, each at its tolerance and time budget.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

from __future__ import annotations

import pytest

from kannappan.acceptance import CRITERIA, DEFAULT_SEED, run_criterion

ACCEPTANCE_LINES: list[str] = []


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"c{n:02d}-{CRITERIA[n][0].replace(' ', '-')}")
def test_criterion(number):
    res = run_criterion(number, DEFAULT_SEED)
    ACCEPTANCE_LINES.append(res.line())
    print(res.line())
    assert res.passed, res.detail
    assert res.in_time, f"{res.seconds:.2f}s over the {res.budget}s budget"
