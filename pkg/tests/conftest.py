import numpy as np
import pytest

from paritypoly.admm import ParityCheckMatrix

# weight-4 basis of the self-dual (8,4) extended Hamming code
H84 = np.array([[1, 1, 1, 1, 0, 0, 0, 0],
                [0, 0, 1, 1, 1, 1, 0, 0],
                [0, 0, 0, 0, 1, 1, 1, 1],
                [0, 1, 0, 1, 0, 1, 0, 1]])

H74 = np.array([[1, 1, 1, 0, 1, 0, 0],
                [0, 1, 1, 1, 0, 1, 0],
                [1, 1, 0, 1, 0, 0, 1]])


def codewords(h):
    """All codewords of a small code, by brute force."""
    n = h.n
    words = (np.arange(2**n)[:, None] >> np.arange(n)[::-1]) & 1
    H = h.to_dense().astype(np.int64)
    return words[((words @ H.T) % 2 == 0).all(axis=1)]


@pytest.fixture(scope="session")
def h84():
    return ParityCheckMatrix.from_dense(H84)


@pytest.fixture(scope="session")
def h74():
    return ParityCheckMatrix.from_dense(H74)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LOG: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LOG):
            terminalreporter.write_line(ACCEPTANCE_LOG[n])
