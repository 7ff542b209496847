import numpy as np
import pytest

from glassoknots.correlation import CorrelationMatrix, correlation_matrix, ordered_edges
from glassoknots.ingest import DataMatrix


def random_correlation(rng, p, n=None):
    """Sample correlation matrix of ``n`` Gaussian rows in ``p`` columns."""
    n = n if n is not None else p + 5
    return correlation_matrix(DataMatrix(rng.standard_normal((n, p))))


def random_edges(rng, p, n=None):
    return ordered_edges(random_correlation(rng, p, n))


def matrix_from_upper(p, values):
    """Symmetric unit-diagonal matrix from ``{(i, j): value}`` (0-based)."""
    s = np.eye(p)
    for (i, j), v in values.items():
        s[i, j] = s[j, i] = v
    return CorrelationMatrix(s, 10)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def three_var():
    # 0.9 on (0,1), 0.8 on (0,2), 0.7 on (1,2)
    return matrix_from_upper(3, {(0, 1): 0.9, (0, 2): 0.8, (1, 2): 0.7})


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def verdict():
    """Print and keep a PASS/FAIL line; the lines are repeated in the terminal summary."""

    def record(criterion, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
