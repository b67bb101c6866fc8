from __future__ import annotations

import json
from pathlib import Path

import pytest

from arginote.engine import Event, SessionState
from arginote.simulate import run_script

DATA_DIR = Path(__file__).parent / "data"

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


@pytest.fixture(scope="session")
def four_team_script() -> dict:
    return json.loads((DATA_DIR / "four_teams.json").read_text())


@pytest.fixture(scope="session")
def four_team_run(four_team_script) -> tuple[SessionState, list[Event]]:
    return run_script(four_team_script, seed=7)


@pytest.fixture(scope="session")
def four_team_log(four_team_run) -> list[Event]:
    return four_team_run[1]


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if report.nodeid.rpartition("::")[0].endswith("test_acceptance.py"):
        _ACCEPTANCE_RESULTS.append((report.nodeid.rpartition("::")[2], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE_RESULTS:
        marker = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{marker:>6}  {name}")
