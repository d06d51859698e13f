import math

import numpy as np
import pytest

from photonsub.fock import from_pure
from photonsub.states import SqueezeParams, photon_subtracted

ACCEPTANCE_LINES = []

# tight truncation for oracle comparisons: Wigner error of a truncated pure
# state scales like sqrt(tail)
ORACLE_TOL = 1e-20


@pytest.fixture
def record_criterion():
    def record(number, title, passed, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  criterion {number}: {title}  {detail}".rstrip())
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def kitten():
    """Single-photon-subtracted state at r = 0.31, theta = 0, and its density matrix."""
    state = photon_subtracted(SqueezeParams(0.31), 1)
    return state, from_pure(state)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_points(rng, count=25, radius=2.0):
    return rng.uniform(-radius, radius, count) + 1j * rng.uniform(-radius, radius, count)


PARAM_SETS = [
    SqueezeParams(0.31, 0.0),
    SqueezeParams(0.31, math.pi / 3),
    SqueezeParams(0.8, 0.0),
    SqueezeParams(0.8, math.pi / 3),
]
