"""Shared test plumbing: collects acceptance-check summary lines."""

_CRITERION_LINES: list[str] = []


def record_criterion(line: str) -> None:
    _CRITERION_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _CRITERION_LINES:
        terminalreporter.write_sep("-", "acceptance summary")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)
