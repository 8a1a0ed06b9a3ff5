import pytest

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line for an acceptance criterion."""

    def record(number: int, title: str, problems: list):
        status = "PASS" if not problems else "FAIL"
        line = f"criterion {number:2d}: {status}  {title}"
        if problems:
            line += "  <- " + "; ".join(str(p) for p in problems[:6])
        ACCEPTANCE_LINES[number] = line
        print(line)
        assert not problems, "\n".join(str(p) for p in problems)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
