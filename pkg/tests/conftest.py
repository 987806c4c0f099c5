import pytest

from helpers import ACCEPTANCE, hourglass


@pytest.fixture
def hg():
    return hourglass()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
