from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the summary prints them after the run."""

    def record(number, passed, detail):
        ACCEPTANCE_LINES.append((number, passed, detail))
        return passed

    return record


PROPERTY_OUTCOMES = {}


def pytest_runtest_logreport(report):
    # criterion 9 is four hypothesis tests; fold them into one line
    if report.when == "call" and "::test_c9_" in report.nodeid:
        PROPERTY_OUTCOMES[report.nodeid.rsplit("::", 1)[1]] = report.passed


def pytest_terminal_summary(terminalreporter):
    if PROPERTY_OUTCOMES:
        names = ", ".join(n.removeprefix("test_c9_") for n in sorted(PROPERTY_OUTCOMES))
        ACCEPTANCE_LINES.append(
            (9, all(PROPERTY_OUTCOMES.values()), f"estimator properties ({names}), 1000 cases each")
        )
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE_LINES, key=lambda r: (r[0], r[2])):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
