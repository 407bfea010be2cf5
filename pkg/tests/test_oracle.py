import math

import pytest

from dilute1d.free_fermi import hardcore_exact_energy
from dilute1d.oracle import (
    OracleProblem,
    ResolutionError,
    bethe_delta_energy_dirichlet,
    build_hamiltonian,
    ground_energy,
    robinson_check,
)
from dilute1d.potentials import (
    DeltaSpike,
    Potential,
    make_hard_core,
    make_lieb_liniger,
)

FREE = Potential([])


def test_n1_dirichlet_free_mode():
    res = ground_energy(
        OracleProblem(N=1, L=1.0, bc="dirichlet", potential=FREE, M=64), refinements=4
    )
    assert res.extrapolated == pytest.approx(math.pi**2, abs=1e-6)
    assert res.order == pytest.approx(2.0, abs=0.05)


def test_n1_neumann_free_mode_is_zero():
    res = ground_energy(
        OracleProblem(N=1, L=1.0, bc="neumann", potential=FREE, M=64), refinements=3
    )
    # zero up to eigenvalue roundoff, which scales with the matrix norm 1/h^2
    assert abs(res.extrapolated) < 1e-9


def test_problem_validation():
    with pytest.raises(ValueError):
        OracleProblem(N=4, L=1.0, bc="dirichlet", potential=FREE)
    with pytest.raises(ValueError):
        OracleProblem(N=1, L=1.0, bc="periodic", potential=FREE)
    with pytest.raises(ValueError):
        OracleProblem(N=1, L=1.0, bc="dirichlet", potential=FREE, M=32)
    with pytest.raises(ValueError):
        ground_energy(
            OracleProblem(N=1, L=1.0, bc="dirichlet", potential=FREE), refinements=2
        )


def test_unresolvable_features_raise():
    narrow_pair = Potential([DeltaSpike(1e-4, 1.0)])
    with pytest.raises(ResolutionError):
        build_hamiltonian(
            OracleProblem(N=2, L=1.0, bc="dirichlet", potential=narrow_pair, M=64)
        )


def test_grid_convergence_order_h2_for_smooth():
    # successive eigenvalue differences shrink by ~4 per refinement
    res = ground_energy(
        OracleProblem(N=1, L=1.0, bc="dirichlet", potential=FREE, M=64), refinements=4
    )
    d1 = res.energies[1] - res.energies[0]
    d2 = res.energies[2] - res.energies[1]
    d3 = res.energies[3] - res.energies[2]
    assert 3.5 <= d1 / d2 <= 4.5
    assert 3.5 <= d2 / d3 <= 4.5


def test_n2_hard_core_matches_girardeau_shift():
    res = ground_energy(
        OracleProblem(N=2, L=1.0, bc="dirichlet", potential=make_hard_core(0.25), M=64),
        refinements=3,
    )
    assert res.extrapolated == pytest.approx(hardcore_exact_energy(2, 1.0, 0.25), rel=1e-5)


def test_n2_delta_matches_bethe_roots():
    c, L = 1.0, 10.0
    res = ground_energy(
        OracleProblem(N=2, L=L, bc="dirichlet", potential=make_lieb_liniger(c), M=64),
        refinements=3,
    )
    assert res.extrapolated == pytest.approx(bethe_delta_energy_dirichlet(c, L), rel=1e-4)


def test_n2_neumann_weak_coupling_perturbative():
    c, L = 0.01, 10.0
    res = ground_energy(
        OracleProblem(N=2, L=L, bc="neumann", potential=make_lieb_liniger(c), M=96),
        refinements=3,
    )
    # first-order shift 2c <delta(x1-x2)> = 2c/L for the flat state
    assert res.extrapolated == pytest.approx(2.0 * c / L, rel=0.05)


def test_impenetrable_limit_identification():
    strong = ground_energy(
        OracleProblem(N=2, L=1.0, bc="dirichlet", potential=make_lieb_liniger(5e3), M=64),
        refinements=3,
    )
    tg = hardcore_exact_energy(2, 1.0, 0.0)
    assert strong.extrapolated == pytest.approx(tg, rel=2e-3)


def test_boundary_condition_ordering():
    for p in (make_lieb_liniger(2.0), make_hard_core(0.1)):
        en = ground_energy(
            OracleProblem(N=2, L=5.0, bc="neumann", potential=p, M=64), refinements=3
        )
        ed = ground_energy(
            OracleProblem(N=2, L=5.0, bc="dirichlet", potential=p, M=64), refinements=3
        )
        assert en.extrapolated <= ed.extrapolated


def test_monotonicity_in_coupling():
    es = []
    for c in (0.5, 1.0, 2.0, 4.0):
        res = ground_energy(
            OracleProblem(N=2, L=5.0, bc="dirichlet", potential=make_lieb_liniger(c), M=64),
            refinements=3,
        )
        es.append(res.extrapolated)
    assert all(a < b for a, b in zip(es, es[1:]))


def test_fermi_sector_equals_impenetrable_bose():
    p = make_lieb_liniger(2.0)
    fermi = ground_energy(
        OracleProblem(N=2, L=5.0, bc="dirichlet", potential=p, symmetry="fermi", M=64),
        refinements=3,
    )
    # the delta never acts on the antisymmetric sector: free fermions
    assert fermi.extrapolated == pytest.approx(hardcore_exact_energy(2, 5.0, 0.0), rel=1e-6)


def test_determinism_fixed_seed():
    prob = OracleProblem(N=2, L=5.0, bc="dirichlet", potential=make_lieb_liniger(1.0), M=64)
    r1 = ground_energy(prob, refinements=3)
    r2 = ground_energy(prob, refinements=3)
    assert r1.energies == r2.energies
    assert r1.extrapolated == r2.extrapolated


def test_n3_free_bosons_dirichlet():
    res = ground_energy(
        OracleProblem(N=3, L=1.0, bc="dirichlet", potential=FREE, M=64), refinements=3
    )
    assert res.extrapolated == pytest.approx(3.0 * math.pi**2, rel=1e-6)


def test_n3_free_fermions_dirichlet():
    res = ground_energy(
        OracleProblem(N=3, L=1.0, bc="dirichlet", potential=FREE, symmetry="fermi", M=64),
        refinements=3,
    )
    assert res.extrapolated == pytest.approx(14.0 * math.pi**2, rel=1e-4)


def test_n3_weak_delta_between_envelopes():
    # weak coupling, Neumann: energy sits between the thermodynamic lower
    # envelope (evaluated at finite N) and the trial-state upper bound scale
    from dilute1d.lieb_liniger import e_of_gamma

    c, L, N = 0.1, 30.0, 3
    res = ground_energy(
        OracleProblem(N=N, L=L, bc="neumann", potential=make_lieb_liniger(c), M=64),
        refinements=3,
    )
    rho = N / L
    thermo = N * rho**2 * e_of_gamma(c / rho).e
    assert 0.0 < res.extrapolated < 1.5 * thermo


def test_robinson_free_particle_explicit():
    rep = robinson_check(1, 1.0, 0.5, FREE, M=64, refinements=3)
    assert rep.holds
    assert rep.lhs_dirichlet == pytest.approx(math.pi**2 / 4.0, rel=1e-4)
    assert rep.rhs_neumann == pytest.approx(8.0, rel=1e-6)


def test_robinson_delta_cases():
    p = make_lieb_liniger(1.0)
    for b in (0.5, 2.0):
        assert robinson_check(2, 10.0, b, p, M=64, refinements=3).holds


def test_robinson_rejects_non_decreasing():
    with pytest.raises(ValueError):
        robinson_check(2, 10.0, 1.0, Potential([DeltaSpike(0.3, 1.0)]))


def test_bethe_limits():
    L = 10.0
    assert bethe_delta_energy_dirichlet(1e9, L) == pytest.approx(
        5.0 * math.pi**2 / L**2, rel=1e-7
    )
    assert bethe_delta_energy_dirichlet(1e-9, L) == pytest.approx(
        2.0 * math.pi**2 / L**2, rel=1e-7
    )
    assert bethe_delta_energy_dirichlet(1e9, L, n=3) == pytest.approx(
        14.0 * math.pi**2 / L**2, rel=1e-7
    )


def test_bethe_small_c_slope():
    L = 10.0
    c = 1e-3
    slope = (bethe_delta_energy_dirichlet(c, L) - 2.0 * math.pi**2 / L**2) / c
    assert slope == pytest.approx(3.0 / L, rel=2e-2)
