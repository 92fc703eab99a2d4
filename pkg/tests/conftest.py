import numpy as np
import pytest

from schmidt_witness.knorm import SolverConfig
from schmidt_witness.linalg import BipartiteDim, State

ACCEPTANCE_LINES: list[str] = []


def random_state(m: int, n: int, rng, rank: int | None = None) -> State:
    """Random density matrix from a Ginibre matrix (full rank unless ``rank`` is given)."""
    mn = m * n
    rank = mn if rank is None else rank
    g = rng.normal(size=(mn, rank)) + 1j * rng.normal(size=(mn, rank))
    rho = g @ g.conj().T
    return State(BipartiteDim(m, n), rho / np.trace(rho).real)


def random_vector(m: int, n: int, rng) -> np.ndarray:
    v = rng.normal(size=m * n) + 1j * rng.normal(size=m * n)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


@pytest.fixture
def cfg():
    return SolverConfig(restarts=16, seed=0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
