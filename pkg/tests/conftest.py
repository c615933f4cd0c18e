from __future__ import annotations

import pytest

_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; printed again in the terminal summary."""

    def record(number: int, passed: bool | None, detail: str = "") -> None:
        status = "EXCLUDED" if passed is None else "PASS" if passed else "FAIL"
        line = f"CRITERION {number:>2}: {status}  {detail}".rstrip()
        print(line)
        _CRITERIA.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
