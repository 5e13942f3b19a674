import random

import pytest


@pytest.fixture
def rng():
    return random.Random(20240611)


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
