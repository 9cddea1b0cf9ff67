"""Shared helpers for the test suite."""

from __future__ import annotations

import random

import pytest

from conformist.elements import Elem, lamp_from_pairs
from conformist.groups import FiniteGroupTable, cyclic_table

# one "ACCEPTANCE NN name: PASS/FAIL (ms)" line per acceptance criterion,
# echoed after the run by pytest_terminal_summary below
ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance checklist", sep="-")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.line(line)


@pytest.fixture(scope="session")
def z3() -> FiniteGroupTable:
    return cyclic_table(3)


@pytest.fixture(scope="session")
def z4() -> FiniteGroupTable:
    return cyclic_table(4)


def s3_table() -> FiniteGroupTable:
    """Symmetric group on 3 letters, identity first (a nonabelian control case)."""
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)]

    def compose(p, q):
        # apply q first, then p
        return tuple(p[q[i]] for i in range(3))

    index = {p: i for i, p in enumerate(perms)}
    mult = [[index[compose(p, q)] for q in perms] for p in perms]
    return FiniteGroupTable(mult, name="sym:3")


def random_elem(rng: random.Random, table: FiniteGroupTable, span: int = 6) -> Elem:
    """Random element with lamp support and shift within +-span."""
    positions = rng.sample(range(-span, span + 1), rng.randint(0, min(4, 2 * span + 1)))
    pairs = [(p, rng.randint(1, table.order - 1)) for p in positions]
    return Elem(table, lamp_from_pairs(table, pairs), rng.randint(-span, span))
