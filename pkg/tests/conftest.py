from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from nlpot._spectral import spectral_apply

settings.register_profile(
    "nlpot",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("nlpot")


@pytest.fixture(scope="session")
def spectral_oracle():
    """Fourier-multiplier evaluation of ``Phi(-Delta) f`` on the line.

    Periodized box of half-width 40 with 2^16 nodes; the images of the
    algebraic fractional kernel are added back through the Hurwitz zeta
    function.  The box error is checked in ``test_operator`` by doubling it.
    """
    return spectral_apply


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Collects PASS/FAIL lines of the acceptance suite for the terminal summary."""
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
