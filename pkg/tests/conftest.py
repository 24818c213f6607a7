import os

import pytest

from helpers import ACCEPTANCE_RESULTS

DATA = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"{ACCEPTANCE_RESULTS[label]}  {label}")
