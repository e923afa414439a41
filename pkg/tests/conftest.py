import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from acceptance_report import REPORT  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(REPORT, key=lambda k: (int(k.split(".")[0]), k)):
        ok, text = REPORT[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {text}")


@pytest.fixture
def outdir(tmp_path):
    return tmp_path / "out"
