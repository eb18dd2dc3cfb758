import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_acceptance_lines = []


def pytest_runtest_logreport(report):
    if report.when == "call":
        _acceptance_lines.extend(v for k, v in report.user_properties if k == "acceptance")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
