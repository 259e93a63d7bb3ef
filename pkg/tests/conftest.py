import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import pytest

# Criterion number -> (passed, summary line); filled by the acceptance tests.
ACCEPTANCE_RESULTS = {}


@pytest.fixture
def acceptance():
    """Record the outcome of one acceptance criterion and assert it."""

    def record(number, title, passed, detail):
        ACCEPTANCE_RESULTS[number] = (bool(passed), f"{title}: {detail}")
        assert passed, f"criterion {number} ({title}) failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, line = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {line}")
