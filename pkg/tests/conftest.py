import pytest

# Filled by test_acceptance.py, one (criterion, passed, detail) tuple per criterion.
ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    def record(criterion, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append((criterion, line))
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
