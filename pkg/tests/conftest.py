from __future__ import annotations

import sys

import pytest

from amenact.groups import FiniteGroup, FreeGroup, FreeProduct, Integers


@pytest.fixture(scope="session")
def z2():
    return FiniteGroup.cyclic(2)


@pytest.fixture(scope="session")
def z3():
    return FiniteGroup.cyclic(3)


@pytest.fixture(scope="session")
def z2z3(z2, z3):
    return FreeProduct([z2, z3])


@pytest.fixture(scope="session")
def zz():
    return FreeProduct([Integers(), Integers()])


@pytest.fixture(scope="session")
def f2():
    return FreeGroup(2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
