from __future__ import annotations

import pytest

_CRITERIA: dict[int, str] = {}


@pytest.fixture
def record_criterion():
    """Record one pass/fail line for an acceptance criterion, then assert."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        _CRITERIA[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[n])
