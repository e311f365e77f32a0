import sys

import pytest

from necklace_invariants.miner import mine


@pytest.fixture(scope="session")
def mined2():
    return mine(2, 10)


@pytest.fixture(scope="session")
def mined3():
    return mine(3, 12)


@pytest.fixture(scope="session")
def mined4():
    return mine(4, 13)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "CRITERIA", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
