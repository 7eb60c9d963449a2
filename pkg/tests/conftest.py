"""Shared pytest plumbing.

The acceptance tests register one line per criterion here; the terminal
summary prints them after the run regardless of output capturing.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
