import sys

import pytest

from decoplate import selftest
from decoplate.config import headline_default


@pytest.fixture(scope="session")
def electron_spec():
    return headline_default("electron")


@pytest.fixture(scope="session")
def proton_spec():
    return headline_default("proton")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = sorted(getattr(mod, "RESULTS", []), key=lambda r: r.number)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for r in results:
        terminalreporter.write_line(selftest.format_result(r))
    terminalreporter.write_line(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
