import numpy as np
import pytest

from wavemix.process import rayleigh, sum_frequency
from wavemix.system import ladder, two_level


@pytest.fixture
def tls():
    return two_level(gap=1.0, coupling=1.0)


@pytest.fixture
def rayleigh_half():
    return rayleigh(0.5)


@pytest.fixture
def ladder3():
    return ladder([0.0, 1.2, 3.2], [1.0, 0.7 + 0.2j], [0.0, 0.1, 0.1])


@pytest.fixture
def sfg3():
    return sum_frequency([0.6, 1.8, 2.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


ACCEPTANCE_LINES = []


def record_acceptance(label, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
