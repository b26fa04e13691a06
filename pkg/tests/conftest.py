"""Shared test state: the acceptance summary printed after the run."""

ACCEPTANCE = []


def criterion(name, ok, detail=""):
    """Record one acceptance line, then fail the calling test if not ok.

    The line is recorded before the assert so a failing criterion still
    shows up in the summary.
    """
    status = "PASS" if ok else "FAIL"
    tail = f" ({detail})" if detail else ""
    ACCEPTANCE.append(f"{name}: {status}{tail}")
    assert ok, f"{name} failed{tail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
