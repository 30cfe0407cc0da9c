import numpy as np
import pytest

from ncosc.irrep import make_irrep


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def k1_irrep():
    return make_irrep("discrete_plus", k=1, window=(1, 12))


@pytest.fixture
def cont_irrep():
    return make_irrep("continuous", lam=-1.0, window=(-6, 6))


def pytest_terminal_summary(terminalreporter):
    # acceptance lines are collected by tests/test_acceptance.py
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
