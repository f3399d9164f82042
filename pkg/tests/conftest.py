"""Shared fixtures; collects acceptance outcomes for the terminal summary."""

import pytest

_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """``record(key, passed, detail)`` stores one acceptance line."""

    def _record(key, passed, detail=""):
        _RESULTS[key] = (bool(passed), detail)
        return bool(passed)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_RESULTS, key=lambda k: (int("".join(c for c in k if c.isdigit())), k)):
        ok, detail = _RESULTS[key]
        terminalreporter.write_line(f"criterion {key:<4} {'PASS' if ok else 'FAIL'}  {detail}")
