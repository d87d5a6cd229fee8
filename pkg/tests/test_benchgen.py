import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cdare.benchgen import (
    ScalarFamilyParams,
    make_example1,
    make_example2,
    params_for_rho,
    random_problem,
    scalar_oracle,
)
from cdare.errors import NoSolutionError, ParameterError
from cdare.hermitian import min_eigenvalue
from cdare.model import eval_cache, normalized_residual, riccati_apply
from cdare.rng import ALGORITHM, SplitMix64
from cdare.solvers import SolverConfig, fpi_solve, make_initial

from conftest import rel_err


def test_splitmix64_reference_stream():
    # published reference outputs of SplitMix64
    s = SplitMix64(0)
    assert [s.next_u64() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    s = SplitMix64(1234567)
    assert [s.next_u64() for _ in range(3)] == [6457827717110365317, 3203168211198807973, 9817491932198370423]
    assert ALGORITHM == "splitmix64"


def test_splitmix64_ranges():
    s = SplitMix64(99)
    u = [s.uniform() for _ in range(2000)]
    assert 0.0 <= min(u) and max(u) < 1.0
    z = np.array([s.complex_normal() for _ in range(4000)])
    assert abs(np.mean(np.abs(z) ** 2) - 1.0) < 0.1


def test_scalar_oracle_running(running_params):
    o = scalar_oracle(running_params)
    assert o.D == pytest.approx(4.1296, rel=1e-14)
    assert o.x_M == pytest.approx(1.196070863670443017, rel=1e-15)
    assert o.x_m == pytest.approx(-0.836070863670443017, rel=1e-15)
    assert o.rho_that == pytest.approx(0.0746465603826513, rel=1e-13)
    assert o.h_M == pytest.approx(-0.16) and o.h_m == pytest.approx(-2.56)


def test_scalar_oracle_critical():
    o = scalar_oracle(ScalarFamilyParams(0.6, 1.0, 1.0, -0.16))
    assert o.D == 0.0
    assert o.x_M == pytest.approx(-0.4, abs=1e-15) and o.x_m == pytest.approx(-0.4, abs=1e-15)
    assert o.rho_that == pytest.approx(1.0, abs=1e-14)


def test_scalar_oracle_no_solution():
    with pytest.raises(NoSolutionError) as info:
        scalar_oracle(ScalarFamilyParams(0.6, 1.0, 1.0, -1.0))
    assert info.value.h_m == pytest.approx(-2.56) and info.value.h_M == pytest.approx(-0.16)


@settings(max_examples=200, deadline=None)
@given(
    a=st.floats(0.05, 3.0),
    phase=st.floats(0, 2 * math.pi),
    b=st.floats(0.2, 3.0),
    r0=st.floats(0.2, 5.0),
    h=st.floats(-10.0, 10.0),
)
def test_scalar_roots(a, phase, b, r0, h):
    p = ScalarFamilyParams(a * complex(math.cos(phase), math.sin(phase)), b, r0, h)
    try:
        o = scalar_oracle(p)
    except NoSolutionError:
        assert p.h_m < h < p.h_M
        return
    g, c = p.g, 1.0 - a * a - p.g * h
    scale = g * max(1.0, o.x_M**2, o.x_m**2) + abs(c) * max(1.0, abs(o.x_M), abs(o.x_m)) + abs(h)
    for x in (o.x_M, o.x_m):
        assert abs(g * x * x + c * x - h) <= 1e-12 * scale
    assert o.x_M >= o.x_m


@pytest.mark.parametrize("rho", [0.0728, 0.3, 0.9])
def test_params_for_rho(rho):
    p = params_for_rho(0.6, 1.0, 1.0, rho) if rho < 0.36 else params_for_rho(0.95, 1.0, 1.0, rho)
    assert scalar_oracle(p).rho_that == pytest.approx(rho, rel=1e-12)
    with pytest.raises(ParameterError):
        params_for_rho(0.6, 1.0, 1.0, 1.0)


def test_example1_scalar(running_params):
    P, X = make_example1(1, running_params, seed=0)
    assert P.n == 1
    assert X[0, 0].real == pytest.approx(1.196070863670443017, rel=1e-15)


@pytest.mark.parametrize("n", [3, 4, 50, 100])
def test_example1_reference_solves(n, running_params):
    P, X = make_example1(n, running_params, seed=7)
    assert normalized_residual(P, X) <= 1e-13
    assert rel_err(riccati_apply(P, X), X) <= 1e-12
    assert eval_cache(P, X).rho_that == pytest.approx(scalar_oracle(running_params).rho_that, rel=1e-12)


def test_example1_rejects_h_below_threshold():
    with pytest.raises(ParameterError, match="h_M"):
        p = ScalarFamilyParams(0.6, 1.0, 1.0, 1.0)
        make_example1(3, ScalarFamilyParams(0.6, 1.0, 1.0, p.h_M), 0)


def test_determinism(running_params):
    P1, X1 = make_example1(6, running_params, seed=11)
    P2, X2 = make_example1(6, running_params, seed=11)
    P3, _ = make_example1(6, running_params, seed=12)
    for f in "ABRH":
        assert np.array_equal(getattr(P1, f), getattr(P2, f))
    assert np.array_equal(X1, X2)
    assert not np.array_equal(P1.H, P3.H)
    Q1, Q2 = random_problem(5, 2, 3, "indefinite"), random_problem(5, 2, 3, "indefinite")
    for f in "ABRH":
        assert np.array_equal(getattr(Q1, f), getattr(Q2, f))
    E1, E2 = make_example2(5, 0.6, 1.0, 1.0, 4), make_example2(5, 0.6, 1.0, 1.0, 4)
    assert np.array_equal(E1[0].H, E2[0].H)


@pytest.mark.parametrize("n", [1, 5, 50])
def test_example2_critical(n):
    P, X = make_example2(n, 0.6, 1.0, 1.0, seed=2)
    if n == 1:
        assert X[0, 0].real == pytest.approx(-0.4, abs=1e-15)
        assert P.H[0, 0].real == pytest.approx(-0.16, abs=1e-15)
    rho = eval_cache(P, X).rho_that
    assert abs(rho - 1.0) <= 1e-8
    assert normalized_residual(P, X) <= 1e-13


def test_random_problem_regimes():
    P = random_problem(6, 3, 1, "pd")
    assert min_eigenvalue(P.H) >= -1e-12
    np.testing.assert_array_equal(P.R, np.eye(3))
    assert np.sum(np.abs(P.A) ** 2) <= 0.8 + 1e-12
    Q = random_problem(6, 3, 1, "indefinite")
    assert Q.R[0, 0].real < 0
    with pytest.raises(ParameterError):
        random_problem(0, 1)
    with pytest.raises(ParameterError):
        random_problem(3, 1, regime="other")


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("n", [2, 7, 20])
def test_random_problem_smoke(n, seed):
    P = random_problem(n, 1 + seed % 3, seed)
    rep = fpi_solve(P, make_initial(P), SolverConfig(nres_tol=1e-15, max_iters=500))
    assert rep.final_nres <= 1e-12
