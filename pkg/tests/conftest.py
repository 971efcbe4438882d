import numpy as np
import pytest


def explicit_offdiag(left, right):
    """Untiled oracle: form M = left @ right and reduce its off-diagonal."""
    M = left @ right
    off = M[~np.eye(M.shape[0], dtype=bool)]
    return np.max(np.abs(off)), np.sum(off**2)


def unit_columns(rng, d, F):
    g = rng.standard_normal((d, F))
    return g / np.linalg.norm(g, axis=0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, echoed in the terminal summary so the
# lines survive output capture
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
