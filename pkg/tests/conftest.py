import sys

import pytest

from grouplab.groups import builtin_group
from grouplab.hnn import build_a1

NAMES = ["C1", "C2", "C3", "C4", "C6", "S3", "D4", "Q8", "A4"]


@pytest.fixture(scope="session")
def groups():
    return {name: builtin_group(name) for name in NAMES}


@pytest.fixture(scope="session")
def a1():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = build_a1(builtin_group(name))
        return cache[name]

    return get


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[n])
