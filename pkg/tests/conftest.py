import math

import numpy as np
import pytest

from chaosmoments import CoefficientSequence


def random_sequence(rng, kind="classical", k_max=6, normalized=True):
    k = int(rng.integers(1, k_max + 1))
    lam = rng.uniform(-1.0, 1.0, size=k)
    while not np.any(lam):
        lam = rng.uniform(-1.0, 1.0, size=k)
    if normalized:
        lam = lam / np.linalg.norm(lam)
    return CoefficientSequence(kind, lam)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def half():
    return 1.0 / math.sqrt(2.0)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def record_acceptance(number, passed, summary):
    ACCEPTANCE_LINES[number] = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {summary}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
