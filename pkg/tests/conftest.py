import pytest

from support import ACCEPTANCE_LINES, DESSIN, forms


@pytest.fixture
def dessin():
    return forms(*DESSIN)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
