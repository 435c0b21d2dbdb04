from __future__ import annotations

import pytest
from hypothesis import strategies as st

from fixerbreaker.core import Pot, SetFamily
from fixerbreaker.game import GameState

ACCEPTANCE_LINES: list[str] = []


def family(pot: Pot, *sets: str) -> SetFamily:
    """``family(pot, "ab", "bc")`` -> sets {a,b}, {b,c} (one-letter element names)."""
    return SetFamily.from_names(pot, [list(s) for s in sets])


def state(pot_letters: str, *sets: str, t: int = 1, eta=None) -> GameState:
    pot = Pot(tuple(pot_letters))
    return GameState.new(pot, family(pot, *sets), t, eta)


@st.composite
def families(draw, max_pot: int = 6, max_sets: int = 5, min_size: int = 1):
    n = draw(st.integers(1, max_pot))
    k = draw(st.integers(1, max_sets))
    sets = [
        tuple(sorted(draw(st.sets(st.integers(0, n - 1), min_size=min(min_size, n), max_size=n))))
        for _ in range(k)
    ]
    return n, SetFamily(tuple(sets))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    def record(number: int, passed: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
    return record
