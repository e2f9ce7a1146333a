import re

import numpy as np
import pytest

_CRITERIA = {}
_CRITERION_RE = re.compile(r"test_criterion_(\d+)")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_collection_modifyitems(items):
    for item in items:
        m = _CRITERION_RE.match(item.name)
        if m:
            doc = (item.obj.__doc__ or "").strip().splitlines()
            _CRITERIA[int(m.group(1))] = {"title": doc[0] if doc else item.name, "ok": None}


def pytest_runtest_logreport(report):
    m = _CRITERION_RE.search(report.nodeid)
    if not m or int(m.group(1)) not in _CRITERIA:
        return
    entry = _CRITERIA[int(m.group(1))]
    if report.when == "call" or report.failed:
        passed = report.passed and entry["ok"] is not False
        entry["ok"] = passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        entry = _CRITERIA[n]
        status = {True: "PASS", False: "FAIL", None: "NOT RUN"}[entry["ok"]]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {entry['title']}")
