import numpy as np
import pytest

from rmatrix_siegert import ScatteringProblem, bargmann, solve_problem


def circular_deg_distance(x, y):
    """Distance between two phase shifts defined modulo 180 degrees."""
    d = (x - y) % 180.0
    return min(d, 180.0 - d)


@pytest.fixture(scope="session")
def bargmann_problem():
    return ScatteringProblem.build(bargmann(2, -1), n_points=25, channel_radius=5)


@pytest.fixture(scope="session")
def bargmann_problem_exact_overlap(bargmann_problem):
    return bargmann_problem.with_overlap(False)


@pytest.fixture(scope="session")
def bargmann_set(bargmann_problem):
    return solve_problem(bargmann_problem)


@pytest.fixture(scope="session")
def bargmann_set_exact_overlap(bargmann_problem_exact_overlap):
    return solve_problem(bargmann_problem_exact_overlap)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
