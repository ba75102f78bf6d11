import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from rgdlin import CoxeterMatrix, CoxeterSystem

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def universal():
    return CoxeterSystem(CoxeterMatrix.universal())


@pytest.fixture(scope="session")
def t444():
    return CoxeterSystem(CoxeterMatrix.type444())


@pytest.fixture(scope="session")
def mixed():
    # m_rs = 2, m_rt = 4, m_st = inf
    return CoxeterSystem(CoxeterMatrix.from_upper(("r", "s", "t"), {("r", "s"): 2, ("r", "t"): 4, ("s", "t"): "inf"}))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
