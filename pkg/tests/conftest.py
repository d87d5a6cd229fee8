import numpy as np
import pytest

from cdare.benchgen import ScalarFamilyParams, random_problem
from cdare.model import CdareProblem


def rand_c(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def rand_herm(rng, n, scale=1.0):
    W = rand_c(rng, n, n)
    return scale * 0.5 * (W + W.conj().T)


def rel_err(X, Y):
    return np.linalg.norm(X - Y, 2) / max(1.0, np.linalg.norm(Y, 2))


def scalar_problem(a=0.6, b=1.0, r=1.0, h=1.0):
    return CdareProblem([[a]], [[b]], [[r]], [[h]])


@pytest.fixture
def running():
    """The scalar problem a=0.6, b=1, r=1, h=1 used throughout the examples."""
    return scalar_problem()


@pytest.fixture
def running_params():
    return ScalarFamilyParams(a=0.6, b=1.0, r0=1.0, h=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[(3, 1, 1), (4, 2, 2), (6, 3, 3)])
def small_pd(request):
    n, m, seed = request.param
    return random_problem(n, m, seed, "pd")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(results):
        terminalreporter.write_line(mod._line(i, *results[i]))
