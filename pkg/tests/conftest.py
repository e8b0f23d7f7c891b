import numpy as np
import pytest

from composable_fabric.instances import default_seed

_criteria: dict[int, tuple[str, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(default_seed())


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    number = dict(report.user_properties).get("criterion")
    if number is None:
        return
    title = dict(report.user_properties).get("title", "")
    _criteria[number] = (title, "PASS" if report.outcome == "passed" else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
