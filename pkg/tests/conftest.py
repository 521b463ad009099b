import random

import pytest

from fibercone.blowup_chain import FREE


def random_parents(rng: random.Random, length: int, free_prob: float = 0.1) -> list[int]:
    parents = [FREE]
    for i in range(2, length + 1):
        parents.append(FREE if rng.random() < free_prob else rng.randint(1, i - 1))
    return parents


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
