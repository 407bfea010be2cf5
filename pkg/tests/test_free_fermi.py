import math

import numpy as np
import pytest

from dilute1d.free_fermi import (
    FermiEnsemble,
    dirichlet_energy,
    dirichlet_kernel,
    gamma1,
    gamma1_direct,
    gamma1_partial,
    hardcore_exact_energy,
    log_psi_F,
    neumann_energy,
    pair_density_quadratic_coeff,
    pair_quotient,
    psi_F,
    rho1,
    rho2,
    rho3,
    rho3_scaling_report,
    slater_psi_F,
)


def test_dirichlet_energy_exact_values():
    assert dirichlet_energy(1, 1.0) == pytest.approx(math.pi**2)
    assert dirichlet_energy(3, 1.0) == pytest.approx(14.0 * math.pi**2)


def test_dirichlet_energy_leading_order():
    N, L = 100, 100.0
    leading = (math.pi**2 / 3.0) * N * (N / L) ** 2
    assert dirichlet_energy(N, L) == pytest.approx(leading, rel=0.016)
    # the 1 + O(1/N) correction is 3/(2N) at leading order
    assert dirichlet_energy(N, L) / leading - 1.0 == pytest.approx(1.5 / N, rel=0.01)


def test_dirichlet_kernel_matches_sum():
    rng = np.random.default_rng(1)
    t = rng.uniform(-3.0, 3.0, 50)
    for n in (3, 10, 41):
        direct = np.sum(np.cos(np.outer(np.arange(1, n + 1), t)), axis=0) / math.pi + 1.0 / (
            2.0 * math.pi
        )
        assert np.allclose(dirichlet_kernel(n, t), direct, atol=1e-12)


def test_dirichlet_kernel_removable_points():
    assert dirichlet_kernel(7, 0.0) == pytest.approx(15.0 / (2 * math.pi))
    assert dirichlet_kernel(7, 2.0 * math.pi) == pytest.approx(15.0 / (2 * math.pi))
    assert np.isfinite(dirichlet_kernel(7, 1e-300))


def test_psi_antisymmetry_zero_at_coincidence():
    ens = FermiEnsemble(4, 1.0)
    x = np.array([0.2, 0.2, 0.5, 0.9])
    assert psi_F(ens, x) == pytest.approx(0.0, abs=1e-12)


def test_psi_positive_on_ordered_sector():
    for N in (2, 3, 5):
        ens = FermiEnsemble(N, 1.0)
        x = np.linspace(0.1, 0.9, N)
        assert psi_F(ens, x) > 0.0


def test_psi_matches_slater_determinant():
    rng = np.random.default_rng(9)
    for N in range(2, 7):
        ens = FermiEnsemble(N, 1.0)
        x = rng.uniform(0, 1, size=(200, N))
        prod = psi_F(ens, x)
        det = slater_psi_F(ens, x)
        denom = np.maximum(np.abs(det), 1e-300)
        # double-LU determinants themselves carry conditioning noise; 1e-6
        # screens the identity, the acceptance suite re-checks at 1e-10
        # against a high-precision oracle
        assert np.max(np.abs(prod - det) / denom) < 1e-6


def test_log_psi_matches_direct():
    ens = FermiEnsemble(5, 2.0)
    rng = np.random.default_rng(3)
    x = rng.uniform(0, 2, size=(50, 5))
    sign, logmag = log_psi_F(ens, x)
    assert np.allclose(sign * np.exp(logmag), psi_F(ens, x), rtol=1e-11)


def test_psi_large_N_no_underflow():
    ens = FermiEnsemble(40, 40.0)
    x = np.sort(np.random.default_rng(0).uniform(0, 40, 40))
    sign, logmag = log_psi_F(ens, x)
    assert np.isfinite(logmag)
    assert sign != 0.0


def test_pair_quotient_limit():
    ens = FermiEnsemble(3, 1.0)
    base = np.array([0.4, 0.4 + 1e-13, 0.8])
    direct = pair_quotient(ens, base, 0, 1)
    x_eps = np.array([0.4, 0.4 + 1e-5, 0.8])
    finite = psi_F(ens, x_eps) / (x_eps[0] - x_eps[1])
    assert direct == pytest.approx(finite, rel=1e-4)
    assert pair_quotient(ens, base, 1, 0) == pytest.approx(-direct)


def test_gamma1_closed_form_vs_sum():
    rng = np.random.default_rng(12)
    for N in (3, 17, 50):
        ens = FermiEnsemble(N, 2.0)
        x = rng.uniform(0, 2, 40)
        y = rng.uniform(0, 2, 40)
        assert np.allclose(gamma1(ens, x, y), gamma1_direct(ens, x, y), atol=1e-12 * N)


def test_gamma1_trace_is_N():
    ens = FermiEnsemble(6, 3.0)
    x, w = np.polynomial.legendre.leggauss(200)
    xs = 1.5 * (x + 1.0)
    assert float((1.5 * w) @ rho1(ens, xs)) == pytest.approx(6.0, rel=1e-12)


def test_gamma1_derivative_bound():
    # all low-order derivatives stay below pi^k (2 rho)^(k+1)
    ens = FermiEnsemble(25, 5.0)
    rng = np.random.default_rng(4)
    x = rng.uniform(0, 5, 200)
    y = rng.uniform(0, 5, 200)
    for kx in range(3):
        for ky in range(3 - kx):
            vals = gamma1_partial(ens, x, y, kx, ky)
            bound = math.pi ** (kx + ky) * (2 * ens.rho) ** (kx + ky + 1)
            assert np.max(np.abs(vals)) <= bound


def test_rho2_exclusion_symmetry_positivity():
    ens = FermiEnsemble(8, 4.0)
    xs = np.linspace(0.3, 3.7, 9)
    assert np.allclose(rho2(ens, xs, xs), 0.0, atol=1e-10)
    rng = np.random.default_rng(5)
    a = rng.uniform(0, 4, 100)
    b = rng.uniform(0, 4, 100)
    assert np.allclose(rho2(ens, a, b), rho2(ens, b, a), rtol=1e-12)
    assert np.all(rho2(ens, a, b) >= -1e-12)


def test_rho2_pair_count_normalization():
    ens = FermiEnsemble(5, 1.0)
    x, w = np.polynomial.legendre.leggauss(160)
    xs = 0.5 * (x + 1.0)
    ws = 0.5 * w
    grid = rho2(ens, xs[:, None], xs[None, :])
    total = float(ws @ grid @ ws)
    assert total == pytest.approx(5.0 * 4.0, rel=1e-10)


def test_rho2_near_diagonal_coefficient():
    for N, tol in ((50, 0.10), (500, 0.03)):
        ens = FermiEnsemble(N, float(N))
        s = np.geomspace(1e-4 * ens.L, 1e-2 * ens.L, 16)
        coeff = pair_density_quadratic_coeff(ens, ens.L / 2.0, s)
        target = math.pi**2 / 3.0 * ens.rho**4
        assert coeff == pytest.approx(target, rel=tol)


def test_rho3_antisymmetry_and_scaling():
    ens = FermiEnsemble(20, 20.0)
    assert rho3(ens, 5.0, 5.0, 9.0) == pytest.approx(0.0, abs=1e-12)
    rng = np.random.default_rng(6)
    base = rng.uniform(2.0, 18.0, size=(50, 3))
    report = rho3_scaling_report(ens, base)
    assert report["finite"]
    # shrinking all separations by 10x must keep the ratio bounded
    mid = base.mean(axis=1, keepdims=True)
    shrunk = mid + 0.1 * (base - mid)
    report_small = rho3_scaling_report(ens, shrunk)
    assert report_small["finite"]
    assert report_small["max_ratio"] < 10.0 * max(1.0, report["max_ratio"])


def test_rho3_ratio_uniform_in_N():
    rng = np.random.default_rng(8)
    ratios = []
    for N in (20, 50, 100):
        ens = FermiEnsemble(N, float(N))
        pts = rng.uniform(0.3 * N, 0.7 * N, size=(40, 3))
        ratios.append(rho3_scaling_report(ens, pts)["max_ratio"])
    assert max(ratios) < 5.0  # common constant across N


def test_hardcore_exact_energy():
    assert hardcore_exact_energy(2, 1.0, 0.0) == dirichlet_energy(2, 1.0)
    assert hardcore_exact_energy(2, 1.0, 0.25) == pytest.approx(
        5.0 * math.pi**2 / 0.75**2
    )
    with pytest.raises(ValueError):
        hardcore_exact_energy(5, 1.0, 0.3)


def test_hardcore_thermodynamic_trend():
    N, rho, a = 200, 1.0, 0.2
    L = N / rho
    per_particle = hardcore_exact_energy(N, L, a) / N
    target = (math.pi**2 / 3.0) * rho**2 / (1.0 - rho * a) ** 2
    assert per_particle == pytest.approx(target, rel=0.02)


def test_neumann_energy():
    assert neumann_energy(1, 1.0) == 0.0
    assert neumann_energy(3, 2.0) == pytest.approx((math.pi / 2.0) ** 2 * 5.0)


def test_gamma1_kernel_occupation_spectrum():
    # eigenvalues of the discretized kernel lie in [0, 1] and sum to N
    ens = FermiEnsemble(4, 1.0)
    x, w = np.polynomial.legendre.leggauss(120)
    xs = 0.5 * (x + 1.0)
    ws = 0.5 * w
    kernel = gamma1(ens, xs[:, None], xs[None, :])
    sym = np.sqrt(ws)[:, None] * kernel * np.sqrt(ws)[None, :]
    evals = np.linalg.eigvalsh(sym)
    assert np.all(evals >= -1e-10)
    assert np.all(evals <= 1.0 + 1e-10)
    assert np.sum(evals) == pytest.approx(4.0, rel=1e-10)
