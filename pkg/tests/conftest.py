import pytest

from batchgreedy import TaskAssignment, UniformMatroid
from helpers import ACCEPTANCE_LINES, DESK_P


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_LINES):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title}  {detail}")


@pytest.fixture
def desk():
    return TaskAssignment(DESK_P)


@pytest.fixture
def desk_uniform(desk):
    return UniformMatroid(desk.ground, 2)
