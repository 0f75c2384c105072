"""Shared helpers: acceptance verdict lines rendered after the run."""

ACCEPTANCE_LINES = []


def record_acceptance(num: int, ok: bool, detail: str) -> None:
    """Record one verdict line for a numbered acceptance criterion."""
    line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
