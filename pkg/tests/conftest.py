import numpy as np
import pytest

from alphalift.experiments import toy_joint
from alphalift.probability import random_joint


@pytest.fixture
def toy():
    """Two-secret, four-symbol toy joint with p(S = 1) = 0.6."""
    return toy_joint(0.6)


def random_joints(count, max_s=10, max_x=10, base_seed=0, min_s=2, min_x=2):
    """Deterministic list of random joints with varied shapes."""
    rng = np.random.Generator(np.random.PCG64(base_seed))
    out = []
    for i in range(count):
        ns = int(rng.integers(min_s, max_s + 1))
        nx = int(rng.integers(min_x, max_x + 1))
        out.append(random_joint(ns, nx, base_seed * 100_000 + i))
    return out


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
