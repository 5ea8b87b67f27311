from functools import lru_cache

import pytest

from chamberfold.specfile import load_group


@lru_cache(maxsize=None)
def _group(name):
    return load_group(name)


@pytest.fixture(scope="session")
def grp():
    return _group


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
