import numpy as np
import pytest

from oracles import worked_example

# (criterion number, passed, detail) rows recorded by test_acceptance.py
ACCEPTANCE_LINES = []


@pytest.fixture
def worked():
    return worked_example()


@pytest.fixture
def rng():
    return np.random.default_rng(20251015)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(ACCEPTANCE_LINES, key=lambda row: row[0]):
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
