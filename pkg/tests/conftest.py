import os
import random

import pytest
from hypothesis import HealthCheck, settings

from fenhedonic import CoalitionStructure, FenGame

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("fast", max_examples=20, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def game_a():
    """Friend path 1-2-3 with enemy edge (1,3), f = e = 1."""
    return FenGame.from_edges(3, 2, [(1, 2), (2, 3)], [(1, 3)])


@pytest.fixture
def rng():
    return random.Random(20261018)


def singletons(n):
    return CoalitionStructure.singletons(n)


_ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def report_criterion():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        _ACCEPTANCE_LINES[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(_ACCEPTANCE_LINES[number])
