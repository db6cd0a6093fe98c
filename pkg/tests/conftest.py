import numpy as np
import pytest

from secest import ChannelParams, LinearSystem, ScalarSystem

ACCEPTANCE_LINES = []


def record_acceptance(line: str):
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def scalar_sys():
    # a=1.2, c=q=r=1: boundedness threshold at rate 1 - 1/1.44 = 11/36
    return ScalarSystem(1.2, 1.0, 1.0, 1.0).to_linear()


@pytest.fixture
def second_order_sys():
    A = np.array([[1.2, 1.0], [0.0, 1.1]])
    Q = np.array([[1.0, 0.5], [0.5, 2.0]])
    return LinearSystem(A=A, C=np.array([[1.0, 0.0]]), Q=Q, R=1.0, Sigma0=Q)


@pytest.fixture
def channel_96():
    return ChannelParams(0.9, 0.6)


@pytest.fixture
def channel_97():
    return ChannelParams(0.9, 0.7)
