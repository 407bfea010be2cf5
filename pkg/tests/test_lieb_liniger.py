import math

import numpy as np
import pytest

from dilute1d.lieb_liniger import (
    E_FREE_FERMI,
    check_lower_bound,
    e_of_gamma,
    equation_residual,
    expansion_residual,
    ll_energy,
    lower_bound,
    solve_at_lambda,
)

# frozen after the build: e at lam = 1 with 400 Gauss-Legendre nodes
E_AT_LAMBDA_1 = 0.9507962096834834
GAMMA_AT_LAMBDA_1 = 1.7254056262603434


def test_solve_at_lambda_golden_value():
    st = solve_at_lambda(1.0, 400)
    assert st.e == pytest.approx(E_AT_LAMBDA_1, rel=1e-12)
    assert st.gamma == pytest.approx(GAMMA_AT_LAMBDA_1, rel=1e-12)


def test_node_doubling_self_convergence():
    e200 = solve_at_lambda(1.0, 200).e
    e400 = solve_at_lambda(1.0, 400).e
    assert abs(e200 - e400) / abs(e400) < 1e-10


def test_large_lambda_mass_approaches_free_fermi():
    st = solve_at_lambda(2000.0, 200)
    assert np.max(np.abs(st.g - 1.0 / (2.0 * math.pi))) < 1e-3
    assert st.gamma == pytest.approx(math.pi * st.lam, rel=2e-3)
    assert st.e == pytest.approx(E_FREE_FERMI, rel=5e-3)


def test_state_invariants():
    st = e_of_gamma(3.0)
    assert st.lam == pytest.approx(st.gamma * float(st.weights @ st.g), rel=1e-12)
    assert np.all(st.g >= 1.0 / (2.0 * math.pi) - 1e-12)
    # symmetry of g on the symmetric node set
    assert np.allclose(st.g, st.g[::-1], rtol=1e-11)


def test_equation_residual_off_nodes():
    st = e_of_gamma(10.0)
    ys = np.linspace(-0.97, 0.97, 13)
    assert np.max(np.abs(equation_residual(st, ys))) < 1e-8


def test_sandwich_and_monotonicity():
    gammas = [0.1, 1.0, 10.0, 100.0, 1000.0]
    es = []
    for g in gammas:
        st = e_of_gamma(g)
        assert lower_bound(g) - 1e-9 <= st.e <= E_FREE_FERMI + 1e-9
        assert check_lower_bound(st)
        es.append(st.e)
    assert all(a < b for a, b in zip(es, es[1:]))


def test_lower_bound_negative_control():
    st = e_of_gamma(10.0)
    halved = type(st)(
        gamma=st.gamma,
        lam=st.lam,
        nodes=st.nodes,
        weights=st.weights,
        g=st.g,
        e=st.e / 2.0,
        n_nodes=st.n_nodes,
    )
    assert not check_lower_bound(halved)


def test_inversion_tolerance():
    for gamma in (0.1, 7.3, 250.0):
        st = e_of_gamma(gamma, tol=1e-12)
        assert abs(st.gamma - gamma) <= 1e-12 * gamma


def test_expansion_residual_regime_guard():
    with pytest.raises(ValueError):
        expansion_residual(e_of_gamma(2.0))


def test_expansion_residual_bounded_and_converging():
    # the scaled third-order residual approaches a finite constant
    residuals = [expansion_residual(e_of_gamma(g)) for g in (20.0, 50.0, 100.0, 200.0)]
    assert max(residuals) / min(residuals) < 3.0
    assert residuals == sorted(residuals)  # monotone toward the limit
    assert residuals[-1] < 32.0 * math.pi**4 / 45.0  # known limiting coefficient


def test_weak_coupling_matches_asymptotics():
    g = 1e-4
    st = e_of_gamma(g)
    assert st.ill_conditioned
    asym = g - 4.0 * g**1.5 / (3.0 * math.pi)
    assert st.e == pytest.approx(asym, rel=1e-4)
    assert st.e <= 1e-3


def test_dimensionful_scaling():
    # E = N rho^2 e(c/rho) is exactly invariant under (rho, c) -> (s rho, s c)
    e1 = ll_energy(5, 0.25, 2.0)
    e2 = ll_energy(5, 0.75, 6.0)
    assert e2 == pytest.approx(9.0 * e1, rel=1e-13)
