"""Shared pytest wiring: acceptance verdict lines in the terminal summary.

The acceptance tests record one PASS/FAIL line each; printing them here,
after capture teardown, keeps them visible in a plain ``pytest -v`` run
whether the test passed or not.
"""

acceptance_verdicts: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_verdicts:
        terminalreporter.ensure_newline()
        terminalreporter.section("acceptance verdicts", sep="-")
        for line in acceptance_verdicts:
            terminalreporter.line(line)
