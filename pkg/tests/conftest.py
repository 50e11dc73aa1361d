import numpy as np
import pytest

from imagtime import PotentialSpec, SolverConfig, build_grid, effective_potential, solve_spectrum


@pytest.fixture(scope="session")
def ho_grid():
    return build_grid(10001, 10.0)


@pytest.fixture(scope="session")
def ho_spectrum(ho_grid):
    return solve_spectrum(PotentialSpec.harmonic(), ho_grid, SolverConfig(dt=0.5, n_states=6, max_steps=200_000))


@pytest.fixture(scope="session")
def small_ho():
    """Coarse harmonic problem for oracle comparisons."""
    grid = build_grid(200, 10.0)
    return grid, effective_potential(PotentialSpec.harmonic(), grid)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
