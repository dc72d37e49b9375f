"""Suite-wide fixtures and the acceptance-criteria report."""
from __future__ import annotations

import re

import pytest

_CRITERION_PATTERN = re.compile(r"test_criterion_(\d+)_(\w+)")
_OUTCOME_ORDER = {"passed": 0, "failed": 1, "error": 2, "skipped": 3}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance criterion."""
    rows: dict[int, tuple[str, str]] = {}
    for outcome in ("passed", "failed", "error", "skipped"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            match = _CRITERION_PATTERN.search(nodeid)
            if not match:
                continue
            number = int(match.group(1))
            name = match.group(2).replace("_", " ")
            previous = rows.get(number)
            if previous is None or (_OUTCOME_ORDER[outcome]
                                    > _OUTCOME_ORDER[previous[1]]):
                rows[number] = (name, outcome)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    labels = {"passed": "PASS", "failed": "FAIL",
              "error": "ERROR", "skipped": "SKIPPED"}
    for number in sorted(rows):
        name, outcome = rows[number]
        terminalreporter.write_line(f"criterion {number} ({name}): {labels[outcome]}")


@pytest.fixture
def tmp_ini(tmp_path):
    """Write INI text to a temp file and return its path."""

    def write(text: str, name: str = "experiment.ini"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return write
