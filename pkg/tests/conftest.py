import math

import numpy as np
import pytest
from hypothesis import strategies as st

DEG = math.pi / 180

angles = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi, allow_nan=False)


@st.composite
def unitaries(draw):
    """Haar-ish random 2x2 unitary from Euler angles and a global phase."""
    a, b, c, phase = (draw(angles) for _ in range(4))
    rz = lambda t: np.diag([np.exp(-1j * t / 2), np.exp(1j * t / 2)])
    ry = lambda t: np.array(
        [[math.cos(t / 2), -math.sin(t / 2)], [math.sin(t / 2), math.cos(t / 2)]]
    )
    return np.exp(1j * phase) * rz(a) @ ry(b) @ rz(c)


@st.composite
def state_vectors(draw):
    amps = [draw(st.floats(-1, 1, allow_nan=False)) for _ in range(4)]
    v = np.array([complex(amps[0], amps[1]), complex(amps[2], amps[3])])
    if np.linalg.norm(v) < 1e-3:
        v = np.array([1.0, 0.0], dtype=complex)
    return v / np.linalg.norm(v)


def away_from_pole(t1, t3, margin=1e-3):
    """``theta1 - theta3`` at least ``margin`` from ``pi/2 mod pi``."""
    d = math.remainder(t1 - t3 - math.pi / 2, math.pi)
    return abs(d) >= margin


def naive_matmul(a, b):
    """Triple-loop product, independent of numpy's matmul."""
    n = len(a)
    return np.array(
        [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20121)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
