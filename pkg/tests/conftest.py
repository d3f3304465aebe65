"""Shared pytest hooks: collect acceptance lines, echo them at the end."""

ACCEPTANCE_LINES = []


def record_acceptance(num, ok, detail):
    """Register one criterion verdict; returns ok for the caller's assert."""
    line = f"ACCEPTANCE-{num} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
