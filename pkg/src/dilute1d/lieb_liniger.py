"""Thermodynamic ground state of the 1D contact-repulsion gas.

The dimensionless energy e(gamma) is determined by a coupled system: a
Fredholm equation of the second kind for the quasi-momentum density g on
[-1, 1],

    2 pi g(y) = 1 + 2 lam * int_{-1}^{1} g(x) / (lam^2 + (x - y)^2) dx,

together with lam = gamma * int g and e = (gamma/lam)^3 * int g x^2. The
kernel is analytic for lam > 0, so a Nystrom discretization on Gauss-Legendre
nodes converges spectrally; the dense solve at a few hundred nodes is cheap.

gamma(lam) is monotone increasing, which makes the inversion gamma -> lam a
bracketed scalar root find.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "LLGroundState",
    "solve_at_lambda",
    "e_of_gamma",
    "check_lower_bound",
    "expansion_residual",
    "equation_residual",
    "lower_bound",
    "ll_energy",
    "E_FREE_FERMI",
]

E_FREE_FERMI = math.pi**2 / 3.0  # impenetrable ceiling e(inf)


@dataclass(frozen=True)
class LLGroundState:
    """Converged solver state at one coupling."""

    gamma: float
    lam: float
    nodes: np.ndarray
    weights: np.ndarray
    g: np.ndarray
    e: float
    n_nodes: int
    ill_conditioned: bool = False  # flagged for gamma < 1e-3


def _gauss_legendre(n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n_nodes)


def solve_at_lambda(lam: float, n_nodes: int = 200) -> LLGroundState:
    """Solve the Fredholm system at fixed internal parameter lam > 0."""
    if lam <= 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    if n_nodes < 8:
        raise ValueError(f"n_nodes must be >= 8, got {n_nodes}")
    x, w = _gauss_legendre(n_nodes)
    kernel = lam / (lam**2 + (x[:, None] - x[None, :]) ** 2)
    system = np.eye(n_nodes) - (kernel * w[None, :]) / math.pi
    g = np.linalg.solve(system, np.full(n_nodes, 1.0 / (2.0 * math.pi)))
    mass = float(w @ g)
    gamma = lam / mass
    e = (gamma / lam) ** 3 * float(w @ (g * x**2))
    return LLGroundState(
        gamma=gamma,
        lam=lam,
        nodes=x,
        weights=w,
        g=g,
        e=e,
        n_nodes=n_nodes,
        ill_conditioned=gamma < 1e-3,
    )


def _gamma_at(lam: float, n_nodes: int) -> float:
    return solve_at_lambda(lam, n_nodes).gamma


def _invert_gamma(
    gamma: float, n_nodes: int, tol: float, bracket: tuple[float, float]
) -> LLGroundState:
    lo, hi = bracket
    for _ in range(60):
        if _gamma_at(lo, n_nodes) <= gamma:
            break
        lo /= 8.0
    else:
        raise RuntimeError(f"no lower bracket for gamma = {gamma}")
    for _ in range(60):
        if _gamma_at(hi, n_nodes) >= gamma:
            break
        hi *= 8.0
    else:
        raise RuntimeError(f"no upper bracket for gamma = {gamma}")
    lam = brentq(lambda t: _gamma_at(t, n_nodes) - gamma, lo, hi, xtol=1e-300, rtol=1e-14)
    state = solve_at_lambda(lam, n_nodes)
    if abs(state.gamma - gamma) > tol * gamma:
        raise RuntimeError(
            f"inversion stalled: gamma(lam) = {state.gamma} vs target {gamma}"
        )
    return state


def e_of_gamma(gamma: float, n_nodes: int = 200, tol: float = 1e-12) -> LLGroundState:
    """Invert gamma(lam) by bracketing and solve at the matching lam.

    The bracket starts at [gamma/10, 10 gamma + 10] and expands geometrically
    if gamma(lam) has not crossed the target (it is monotone increasing).
    At small gamma the kernel peak narrows (width lam), so the node count is
    raised until the peak is resolved; n_nodes is the floor, not a cap. The
    refinement re-inverts with a warm bracket around the previous lam.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    n = n_nodes
    bracket = (max(gamma / 10.0, 1e-12), 10.0 * gamma + 10.0)
    for _ in range(5):
        state = _invert_gamma(gamma, n, tol, bracket)
        needed = int(math.ceil(8.0 / state.lam))
        if needed <= n or n >= 2400:
            return state
        n = min(max(needed, 2 * n), 2400)
        bracket = (0.5 * state.lam, 2.0 * state.lam)
    return state


def lower_bound(gamma: float) -> float:
    """Rigorous floor (pi^2/3) (gamma / (gamma + 2))^2."""
    return E_FREE_FERMI * (gamma / (gamma + 2.0)) ** 2


def check_lower_bound(state: LLGroundState, tol: float = 1e-9) -> bool:
    return state.e >= lower_bound(state.gamma) - tol


def expansion_residual(state: LLGroundState) -> float:
    """Scaled third-order residual gamma^3 |e - (pi^2/3)(1 + 2/gamma)^-2|.

    Bounded in gamma for the strong-coupling regime; callers compare residuals
    across gamma rather than against a specific constant.
    """
    if state.gamma < 5.0:
        raise ValueError(f"strong-coupling residual needs gamma >= 5, got {state.gamma}")
    reference = E_FREE_FERMI * (1.0 + 2.0 / state.gamma) ** (-2)
    return state.gamma**3 * abs(state.e - reference)


def equation_residual(state: LLGroundState, ys, n_quad: int | None = None) -> np.ndarray:
    """Residual of the Fredholm equation at off-node points.

    g is extended off the nodes by Nystrom interpolation and the integral is
    re-evaluated on an independent (finer) Gauss-Legendre rule, so this is a
    genuine consistency check rather than a tautology.
    """
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    lam = state.lam

    def g_interp(t: np.ndarray) -> np.ndarray:
        kern = lam / (lam**2 + (t[:, None] - state.nodes[None, :]) ** 2)
        return (1.0 + 2.0 * (kern * state.weights[None, :]) @ state.g) / (2.0 * math.pi)

    xq, wq = _gauss_legendre(n_quad or 2 * state.n_nodes)
    gq = g_interp(xq)
    integral = ((lam / (lam**2 + (xq[None, :] - ys[:, None]) ** 2)) * wq[None, :]) @ gq
    return 2.0 * math.pi * g_interp(ys) - 1.0 - 2.0 * integral


def ll_energy(N: float, rho: float, c: float, n_nodes: int = 200) -> float:
    """Dimensionful thermodynamic energy N rho^2 e(c / rho)."""
    if rho <= 0:
        raise ValueError(f"rho must be > 0, got {rho}")
    return N * rho**2 * e_of_gamma(c / rho, n_nodes=n_nodes).e
