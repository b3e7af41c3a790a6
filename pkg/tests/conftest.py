from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ldchoquet.workbench import load_fixture

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


@pytest.fixture(scope="session")
def students_interval():
    return load_fixture("students_interval")


@pytest.fixture(scope="session")
def students_piecewise():
    return load_fixture("students_piecewise")


@pytest.fixture(scope="session")
def students_weighted_sum():
    return load_fixture("students_weighted_sum")


@pytest.fixture(scope="session")
def students_single_capacity():
    return load_fixture("students_single_capacity")


@pytest.fixture(scope="session")
def universities():
    return load_fixture("universities")


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::", 1)[1]
    if hasattr(report, "wasxfail"):
        outcome = "FAIL (expected: irreproducible reference value, see test reason)"
    elif report.outcome == "passed":
        outcome = "PASS"
    else:
        outcome = "FAIL"
    _ACCEPTANCE_RESULTS.append((name, outcome))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{outcome}] {name}")
