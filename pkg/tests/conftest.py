import numpy as np
import pytest

from t2fde.t1 import AlphaGrid
from t2fde.t2 import BetaGrid, TriangularQT2

FIVE = TriangularQT2(3.5, 4, 4.5, 5, 5.5, 6, 6.5)
ONE = TriangularQT2(-0.5, 0, 0.5, 1, 1.5, 2, 2.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def grids():
    return AlphaGrid(31), BetaGrid(21)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
