"""Shared fixtures and the acceptance-criteria reporter.

Acceptance tests register a one-line verdict through `check`; the terminal
summary prints every recorded line so a full run shows one PASS/FAIL row per
criterion without -s.
"""
from __future__ import annotations

_RESULTS: dict[int, tuple[str, bool]] = {}


def check(number: int, description: str, passed: bool, detail: str = "") -> None:
    """Record an acceptance verdict, then assert it."""
    _RESULTS[number] = (description, bool(passed))
    assert passed, f"acceptance {number:02d} failed: {description}" + (
        f" [{detail}]" if detail else ""
    )


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        description, ok = _RESULTS[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {number:02d} {verdict} - {description}")
