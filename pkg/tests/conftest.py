import numpy as np
import pytest

from qcentropy.grid import symmetric_grid
from qcentropy.model import ModelParams


@pytest.fixture
def params():
    return ModelParams(alpha=1.0)


@pytest.fixture
def small_grid():
    return symmetric_grid(64, 8.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
