import numpy as np
import pytest

from dirac8.clifford import build_gamma_set
from dirac8.fields import Grid
from dirac8.verify import packet_suite

ACCEPTANCE_RESULTS = {}


@pytest.fixture(scope="session")
def gs():
    return build_gamma_set()


@pytest.fixture(scope="session")
def grid2():
    return Grid(2, 128, 48.0)


@pytest.fixture(scope="session")
def grid1():
    return Grid(1, 256, 40.0)


@pytest.fixture(scope="session")
def packet2(gs, grid2):
    return packet_suite(grid2, 1, 3, gs, 1.0)[0]


@pytest.fixture(scope="session")
def packet1(gs):
    return packet_suite(Grid(1, 256, 48.0), 1, 5, gs, 1.0)[0]


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
