import math

import numpy as np
import pytest

from sftoric.polygon import LabeledPolygon

# d = 2 polygon whose parameters reproduce the quoted leading coefficients
GENERAL_D2 = ((-1.0, 1.0), ((0.0, 0.0), (1.0, 0.0)))
# d = 2 polygon with a genuine corner
GENERAL_D2_CORNER = ((-1.0, 1.0), ((0.0, 0.0), (1.0, -1.0)))
PARALLEL_D3 = ((-1.0, 0.0, 2.0), ((1.0, -1.0), (0.0, 0.5), (1.0, 1.0)))


def general_poly(alpha=1.0, beta=1.0, data=GENERAL_D2, s0=1.0, sd=1.0):
    return LabeledPolygon(data[0], data[1], s0, sd, alpha, beta, "general")


def parallel_poly(alpha=1.0, data=PARALLEL_D3):
    return LabeledPolygon(data[0], data[1], 1.0, 1.0, alpha, 0.0, "parallel_ray")


def polar_grid(n=50, r=(0.5, 20.0), theta=(0.05 * math.pi, 0.95 * math.pi)):
    rr = np.geomspace(*r, n)
    tt = np.linspace(*theta, n)
    R, T = np.meshgrid(rr, tt)
    return np.stack([R * np.cos(T), R * np.sin(T)], axis=-1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
