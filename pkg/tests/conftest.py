from __future__ import annotations

import warnings

import pytest

from partialtheta.errors import InexactWarning, NearPoleWarning

# acceptance lines, collected so they survive output capture
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    def emit(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return emit


@pytest.fixture(autouse=True)
def _quiet_inexact():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InexactWarning)
        warnings.simplefilter("ignore", NearPoleWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
