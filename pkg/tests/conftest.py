import numpy as np
import pytest

from modspec.generators import random_connected, standard, triangle_bridge

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def bridge():
    """Two triangles {0,1,2} and {3,4,5} joined by the edge 2-3."""
    return triangle_bridge()


@pytest.fixture
def k4():
    return standard("clique", 4)


@pytest.fixture
def p3():
    return standard("path", 3)


def random_corpus(count, n_range, p_range, seed):
    """Seeded connected G(n, p) graphs with n and p drawn uniformly."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        p = float(rng.uniform(*p_range))
        out.append(random_connected(n, p, seed=int(rng.integers(2**31))))
    return out
