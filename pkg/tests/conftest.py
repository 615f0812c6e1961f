import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from riemann_minimax import SPD, Euclidean, Klein

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_klein(rng, n, dim=2, radius=2.0):
    """Points at hyperbolic distance up to ``radius`` from the origin."""
    g = rng.standard_normal((n, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * np.tanh(radius * rng.random(n))[:, None]


def random_spd(rng, n, dim=3, spread=1.5):
    out = np.empty((n, dim, dim))
    for i in range(n):
        g = rng.standard_normal((dim, dim))
        lam, u = np.linalg.eigh(0.5 * (g + g.T))
        lam *= spread * rng.random() / np.max(np.abs(lam))
        m = (u * np.exp(lam)) @ u.T
        out[i] = 0.5 * (m + m.T)
    return out


def random_points(name, rng, n):
    if name == "euclidean":
        return rng.standard_normal((n, 3))
    if name == "klein":
        return random_klein(rng, n, 3)
    return random_spd(rng, n, 3)


MANIFOLDS = {"euclidean": Euclidean(), "klein": Klein(), "spd": SPD()}


@pytest.fixture(params=sorted(MANIFOLDS))
def manifold_name(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rel(a, b):
    return abs(a - b) / max(1.0, abs(b))





ACCEPTANCE_LINES: list = []


@pytest.fixture
def report():
    """Record one acceptance line, print it, and fail the test if the criterion failed."""

    def _report(number, title, passed, detail):
        line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
