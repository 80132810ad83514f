import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    def log(number, description, ok):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {description}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
