import re

import numpy as np
import pytest

from flatland.linalg import Backend

CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[Backend.EXACT, Backend.FLOAT], ids=["exact", "float"])
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    # one pass/fail line per acceptance criterion
    lines = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if rep.when != "call" and status == "passed":
                continue
            m = CRITERION.search(rep.nodeid)
            if m:
                lines.append((int(m.group(1)), m.group(2), "PASS" if status == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for k, name, verdict in sorted(lines):
            terminalreporter.write_line(f"criterion {k} ({name.replace('_', ' ')}): {verdict}")
