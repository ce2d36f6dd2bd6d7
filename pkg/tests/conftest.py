import pytest

ALPHA = 1.0 / 137.0

# Lines recorded by test_acceptance.py, echoed in the terminal summary.
ACCEPTANCE_LINES: list = []


@pytest.fixture
def alpha():
    return ALPHA


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
