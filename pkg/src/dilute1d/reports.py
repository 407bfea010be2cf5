"""Delimited output and companion figures for the CLI report paths.

Every verb that emits a CSV/JSON table can also render a PNG next to it;
figures use the Agg backend so the CLI works headless.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "write_rows",
    "write_json",
    "figure_scattering",
    "figure_ll_sweep",
    "figure_kappa_sweep",
    "figure_convergence",
    "figure_fermi",
    "figure_validate",
]


def write_rows(rows: list[dict], path: Path, fmt: str = "csv") -> Path:
    """Write a list of uniform dicts as CSV or JSON; returns the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path = path.with_suffix(".json")
        path.write_text(json.dumps(rows, indent=2, default=float) + "\n")
        return path
    path = path.with_suffix(".csv")
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    return path


def write_json(obj, path: Path) -> Path:
    path = Path(path).with_suffix(".json")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, default=float) + "\n")
    return path


def _finish(fig, path: Path) -> Path:
    path = Path(path).with_suffix(".png")
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def figure_scattering(result, path: Path, n_samples: int = 600) -> Path:
    """Scattering solution f0 on [-R, R] with its linear tail marked."""
    R = result.radius
    xs = np.linspace(-R, R, n_samples)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, result.f0(xs), "k-", lw=1.2, label="$f_0$")
    if result.a is not None:
        tail = np.linspace(result.potential.range, R, 50)
        ax.plot(tail, (tail - result.a) / (R - result.a), "r--", lw=1, label="$(x-a)/(R-a)$")
        ax.axvline(result.a, color="0.6", ls=":", lw=1, label=f"a = {result.a:.4g}")
    ax.set_xlabel("x")
    ax.set_ylabel("f(x)")
    ax.legend(loc="lower right", fontsize=8)
    ax.set_title(f"{result.channel.value} channel, R = {R:g}")
    return _finish(fig, path)


def figure_ll_sweep(rows: list[dict], path: Path) -> Path:
    """e(gamma) against the rigorous floor and the strong-coupling curve."""
    g = np.array([r["gamma"] for r in rows])
    e = np.array([r["e"] for r in rows])
    lb = np.array([r["lower_bound"] for r in rows])
    ref = np.array([r["expansion_value"] for r in rows])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogx(g, e, "ko-", ms=3, lw=1, label="$e(\\gamma)$")
    ax.semilogx(g, lb, "b--", lw=1, label="lower bound")
    ax.semilogx(g, ref, "r:", lw=1, label="$(\\pi^2/3)(1+2/\\gamma)^{-2}$")
    ax.axhline(math.pi**2 / 3, color="0.7", lw=0.8)
    ax.set_xlabel("$\\gamma$")
    ax.set_ylabel("$e$")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def figure_kappa_sweep(rows: list[dict], path: Path) -> Path:
    k = np.array([r["kappa"] for r in rows])
    a = np.array([r["a_kappa"] for r in rows])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(k, a, "ko-", ms=3, lw=1)
    ax.set_xlabel("$\\kappa$")
    ax.set_ylabel("$a_\\kappa$")
    return _finish(fig, path)


def figure_convergence(result, path: Path) -> Path:
    """Grid energies against h^order with the extrapolated limit."""
    h = np.array(result.spacings)
    e = np.array(result.energies)
    fig, ax = plt.subplots(figsize=(6, 4))
    p = result.order if result.order > 0 else 2.0
    ax.plot(h**p, e, "ko-", ms=4, lw=1, label="grid energies")
    ax.axhline(result.extrapolated, color="r", ls="--", lw=1, label="extrapolated")
    ax.set_xlabel(f"$h^{{{p:.2f}}}$")
    ax.set_ylabel("E")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def figure_fermi(ens, path: Path, rdm2_grid: int = 0) -> Path:
    """Density profile, optionally with a pair-density cut at the midpoint."""
    from .free_fermi import rho1, rho2

    xs = np.linspace(0.0, ens.L, 400)[1:-1]
    if rdm2_grid:
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    else:
        fig, ax1 = plt.subplots(figsize=(6, 4))
    ax1.plot(xs, rho1(ens, xs), "k-", lw=1)
    ax1.axhline(ens.rho, color="0.7", lw=0.8)
    ax1.set_xlabel("x")
    ax1.set_ylabel("$\\rho^{(1)}(x)$")
    if rdm2_grid:
        s = np.linspace(-2.5 / ens.rho, 2.5 / ens.rho, rdm2_grid)
        x0 = ens.L / 2
        ax2.plot(s, rho2(ens, x0 + 0.5 * s, x0 - 0.5 * s), "k-", lw=1)
        ax2.set_xlabel("s")
        ax2.set_ylabel("$\\rho^{(2)}(x_0+s/2, x_0-s/2)$")
    return _finish(fig, path)


def figure_validate(report, path: Path) -> Path:
    """Oracle energies against the expansion band."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.axhspan(report.lower_envelope, report.upper_envelope, color="0.9", label="envelope")
    ax.axhline(report.expansion, color="r", ls="--", lw=1, label="leading + first")
    ax.axhline(report.leading, color="0.5", ls=":", lw=1, label="leading")
    ticks, labels = [], []
    for i, (name, summary) in enumerate(
        (("neumann", report.oracle_neumann), ("dirichlet", report.oracle_dirichlet))
    ):
        if summary is None:
            continue
        ax.errorbar([i], [summary["energy"]], yerr=[summary["error"]], fmt="ko", ms=5)
        ticks.append(i)
        labels.append(name)
    ax.set_xticks(ticks)
    ax.set_xticklabels(labels)
    ax.set_xlim(-0.5, 1.5)
    ax.set_ylabel("E")
    ax.legend(fontsize=8, loc="best")
    ax.set_title(report.potential)
    return _finish(fig, path)
