import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from thompsonmodes.cli import shipped_config  # noqa: E402

_criteria: list[tuple[str, str, str]] = []


@pytest.fixture
def monomeric():
    return shipped_config("monomeric")


@pytest.fixture
def dimeric():
    return shipped_config("dimeric")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
        _criteria.append((marker.args[0], report.outcome.upper(), detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, detail in _criteria:
        verdict = "PASS" if outcome == "PASSED" else "FAIL"
        line = f"{verdict}  {label}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
