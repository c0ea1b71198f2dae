import pytest
from hypothesis import settings

from matfib import catalog
from matfib.fibring import fibre

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def p1():
    return catalog.p1()


@pytest.fixture(scope="session")
def cpl():
    return catalog.builtin("CPL-neg-and")


@pytest.fixture(scope="session")
def p1_cpl(p1, cpl):
    return fibre(p1, cpl, catalog.pair_p1_cpl())


acceptance_lines = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[acceptance_lines] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(acceptance_lines, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
