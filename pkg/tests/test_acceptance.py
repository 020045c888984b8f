"""Acceptance battery: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and repeated in the terminal summary.
Run alone with ``pytest tests/test_acceptance.py -v -s``.
"""
import pytest

from sturmbeta.acceptance import CRITERIA

LINES = []


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda k: CRITERIA[k].__name__)
def test_criterion(number):
    result = CRITERIA[number]()
    LINES.append(result.line())
    print(result.line())
    assert result.passed, result.detail
