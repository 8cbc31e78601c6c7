import pytest
from hypothesis import settings

from sl3web.corpus import knot_11n183, trefoil
from sl3web.diagram import from_braid_word

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def tref():
    return trefoil()


@pytest.fixture
def tref_braid():
    return from_braid_word([1, 1, 1], 2)


@pytest.fixture(scope="session")
def k11n183():
    return knot_11n183()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
