"""Shared pytest plumbing for the acceptance summary block."""

ACCEPTANCE_LINES: list[tuple[int, str]] = []


def record_criterion(num: int, label: str, ok: bool, detail: str) -> bool:
    """Print one pass/fail line for an acceptance criterion.

    The line is also replayed in the terminal summary so it stays visible
    when pytest captures per-test output.  Returns ok so callers can
    write `assert record_criterion(...)`.
    """
    line = f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} {label}: {detail}"
    ACCEPTANCE_LINES.append((num, line))
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
