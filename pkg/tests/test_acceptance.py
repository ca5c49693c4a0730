"""Acceptance suite: one check per criterion, each reporting a PASS/FAIL line."""

from __future__ import annotations

import pytest

from nlpot.acceptance import CRITERIA, format_line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, acceptance_log):
    result = CRITERIA[number]()
    line = format_line(result)
    print(line)
    acceptance_log(line)
    assert result.number == number
    assert result.passed, line
