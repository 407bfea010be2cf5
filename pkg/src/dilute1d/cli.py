"""Command-line interface.

Verbs: scatter, ll-solve, fermi, oracle, trial, validate, sweep, acceptance.
Report paths write delimited output (CSV or JSON) into --out-dir and, unless
--no-figures is given, a PNG figure next to it. Exit code is 0 only when
every requested verdict passes.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np


def _parse_values(spec: str) -> list[float]:
    """Either a comma list '1,10,100' or a geometric range 'lo:hi:n'."""
    if ":" in spec:
        lo, hi, n = spec.split(":")
        return list(np.geomspace(float(lo), float(hi), int(n)))
    return [float(tok) for tok in spec.split(",") if tok.strip()]


def _load_potential(path: str | None):
    from .potentials import Potential, load_potential

    if path is None:
        return Potential([])
    return load_potential(path)


def _out_base(args, default_name: str) -> Path:
    out = getattr(args, "out", None)
    base = Path(args.out_dir) / (out if out else default_name)
    base.parent.mkdir(parents=True, exist_ok=True)
    return base


def cmd_scatter(args) -> int:
    from .reports import figure_scattering, write_json
    from .scattering import Channel, scattering_energy, solve_scattering

    p = _load_potential(args.config)
    res = solve_scattering(p, Channel(args.channel), args.radius)
    xs = np.linspace(-args.radius, args.radius, args.samples)
    payload = {
        "channel": args.channel,
        "radius": args.radius,
        "a": res.a,
        "energy": res.energy,
        "energy_functional": scattering_energy(res),
        "potential": p.digest(),
        "f0": {"x": xs.tolist(), "f": res.f0(xs).tolist()},
    }
    base = _out_base(args, "scatter")
    path = write_json(payload, base)
    print(f"a = {res.a}, energy = {res.energy}  -> {path}")
    if not args.no_figures:
        print(f"figure -> {figure_scattering(res, base)}")
    return 0


def cmd_ll_solve(args) -> int:
    from .reports import figure_ll_sweep, write_rows
    from .validator import sweep_gamma_rows

    rows = sweep_gamma_rows(_parse_values(args.gamma), n_nodes=args.nodes)
    base = _out_base(args, "ll_solve")
    path = write_rows(rows, base, fmt=args.format)
    print(f"{len(rows)} couplings -> {path}")
    if not args.no_figures:
        print(f"figure -> {figure_ll_sweep(rows, base)}")
    return 0


def cmd_fermi(args) -> int:
    from .free_fermi import FermiEnsemble, dirichlet_energy, rho1, rho2
    from .reports import figure_fermi, write_rows

    ens = FermiEnsemble(args.N, args.L)
    xs = np.linspace(0.0, args.L, 400)[1:-1]
    rows = [{"x": float(x), "rho1": float(r)} for x, r in zip(xs, rho1(ens, xs))]
    base = _out_base(args, "fermi")
    path = write_rows(rows, base, fmt=args.format)
    print(f"E0(Dirichlet) = {dirichlet_energy(args.N, args.L)!r}")
    print(f"density profile -> {path}")
    if args.rdm2_grid:
        s = np.linspace(1e-3 / ens.rho, 2.5 / ens.rho, args.rdm2_grid)
        x0 = args.L / 2
        rows2 = [
            {"s": float(v), "rho2": float(r)}
            for v, r in zip(s, rho2(ens, x0 + 0.5 * s, x0 - 0.5 * s))
        ]
        path2 = write_rows(rows2, Path(str(base) + "_rdm2"), fmt=args.format)
        print(f"pair density cut -> {path2}")
    if not args.no_figures:
        print(f"figure -> {figure_fermi(ens, base, rdm2_grid=args.rdm2_grid)}")
    return 0


def cmd_oracle(args) -> int:
    from .oracle import OracleProblem, ground_energy
    from .reports import figure_convergence, write_json

    problem = OracleProblem(
        N=args.N,
        L=args.L,
        bc=args.bc,
        potential=_load_potential(args.config),
        symmetry=args.symmetry,
        M=args.M,
    )
    res = ground_energy(problem, refinements=args.refine, seed=args.seed)
    payload = {
        "N": args.N,
        "L": args.L,
        "bc": args.bc,
        "potential": problem.potential.digest(),
        "per_grid_energies": list(res.energies),
        "cells": list(res.cells),
        "extrapolated": res.extrapolated,
        "error_estimate": res.error,
        "detected_order": res.order,
        "lanczos_matvecs": list(res.matvec_counts),
    }
    base = _out_base(args, "oracle")
    path = write_json(payload, base)
    print(f"E = {res.extrapolated!r} +- {res.error:.2e} (order {res.order:.2f}) -> {path}")
    if not args.no_figures:
        print(f"figure -> {figure_convergence(res, base)}")
    return 0


def cmd_trial(args) -> int:
    from .reports import write_json
    from .scattering import Channel, solve_scattering
    from .trial_states import build_trial, trial_energy

    p = _load_potential(args.config)
    if args.b == "auto":
        rho = args.N / args.L
        probe = solve_scattering(p, Channel.EVEN, p.range + max(1.0, p.range))
        a = 0.0 if probe.a is None else abs(probe.a)
        b = max(rho ** (-0.2) * a**0.8, 1.25 * p.range, 1e-3 * args.L)
        b = min(b, 0.25 * args.L)
    else:
        b = float(args.b)
    state = build_trial(args.N, args.L, p, b)
    energy = trial_energy(state)
    payload = {
        "N": args.N,
        "L": args.L,
        "b": b,
        "potential": p.digest(),
        "a": state.scattering.a,
        "trial_energy": energy,
    }
    base = _out_base(args, "trial")
    path = write_json(payload, base)
    print(f"trial energy = {energy!r} at b = {b:g} -> {path}")
    return 0


def cmd_validate(args) -> int:
    from .reports import figure_validate, write_json
    from .validator import validate

    report = validate(
        args.N,
        args.L,
        _load_potential(args.config),
        symmetry=args.symmetry,
        c=args.c,
        kappa=args.kappa,
        run_oracle=not args.no_oracle,
        M=args.M,
        refinements=args.refine,
        seed=args.seed,
        c_upper=args.c_upper,
        c_lower=args.c_lower,
    )
    base = _out_base(args, "validate")
    path = write_json(report.as_dict(), base)
    print(f"a = {report.a}, expansion = {report.expansion!r}")
    print(f"envelope = [{report.lower_envelope!r}, {report.upper_envelope!r}]")
    if report.verdict is not None:
        print(f"verdict: {'pass' if report.verdict else 'FAIL'} -> {path}")
    else:
        print(f"report -> {path}")
    if not args.no_figures and report.oracle_neumann is not None:
        print(f"figure -> {figure_validate(report, base)}")
    return 0 if report.verdict in (True, None) else 1


def cmd_sweep(args) -> int:
    from .reports import figure_kappa_sweep, figure_ll_sweep, write_rows
    from .validator import sweep_gamma_rows, sweep_kappa_rows

    rc = 0
    if args.gamma:
        rows = sweep_gamma_rows(_parse_values(args.gamma), n_nodes=args.nodes)
        base = Path(args.out_dir) / "sweep_gamma"
        path = write_rows(rows, base, fmt=args.format)
        print(f"gamma sweep ({len(rows)} rows) -> {path}")
        if not args.no_figures:
            print(f"figure -> {figure_ll_sweep(rows, base)}")
    if args.kappa:
        kappas = [math.pi * v for v in _parse_values(args.kappa)] if args.kappa_pi else _parse_values(args.kappa)
        rows = sweep_kappa_rows(kappas, c=args.c, p=_load_potential(args.config))
        base = Path(args.out_dir) / "sweep_kappa"
        path = write_rows(rows, base, fmt=args.format)
        print(f"kappa sweep ({len(rows)} rows) -> {path}")
        if not args.no_figures:
            print(f"figure -> {figure_kappa_sweep(rows, base)}")
    if not args.gamma and not args.kappa:
        print("nothing to sweep: pass --gamma and/or --kappa", file=sys.stderr)
        rc = 2
    return rc


def cmd_acceptance(args) -> int:
    from .acceptance import run_all

    only = [int(tok) for tok in args.only.split(",")] if args.only else None
    results = run_all(only=only, verbose=True)
    failed = [r for r in results if not r.passed]
    print(f"\n{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dilute1d",
        description="Ground-state energetics of dilute 1D quantum gases",
    )
    parser.add_argument("--out-dir", default=".", help="directory for report files")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--threads", type=int, default=None, help="BLAS thread cap")
    parser.add_argument("--seed", type=lambda s: int(s, 0), default=0x5EED)
    parser.add_argument("--no-figures", action="store_true", help="skip PNG output")
    sub = parser.add_subparsers(dest="verb", required=True)

    sc = sub.add_parser("scatter", help="2-body scattering length and solution")
    sc.add_argument("--config", help="potential config file (omit for v = 0)")
    sc.add_argument("--channel", choices=("even", "odd"), default="even")
    sc.add_argument("--radius", type=float, required=True)
    sc.add_argument("--samples", type=int, default=400)
    sc.add_argument("--out")
    sc.set_defaults(func=cmd_scatter)

    ll = sub.add_parser("ll-solve", help="integral-equation ground state e(gamma)")
    ll.add_argument("--gamma", required=True, help="'1,10,100' or 'lo:hi:n' (geometric)")
    ll.add_argument("--nodes", type=int, default=200)
    ll.add_argument("--out")
    ll.set_defaults(func=cmd_ll_solve)

    fm = sub.add_parser("fermi", help="free-Fermi reference densities")
    fm.add_argument("--N", type=int, required=True)
    fm.add_argument("--L", type=float, required=True)
    fm.add_argument("--rdm2-grid", type=int, default=0)
    fm.add_argument("--out")
    fm.set_defaults(func=cmd_fermi)

    orc = sub.add_parser("oracle", help="few-body exact diagonalization")
    orc.add_argument("--N", type=int, required=True)
    orc.add_argument("--L", type=float, required=True)
    orc.add_argument("--bc", choices=("neumann", "dirichlet"), required=True)
    orc.add_argument("--config")
    orc.add_argument("--symmetry", choices=("bose", "fermi"), default="bose")
    orc.add_argument("--refine", type=int, default=3)
    orc.add_argument("--M", type=int, default=64, help="base cells per dimension")
    orc.add_argument("--out")
    orc.set_defaults(func=cmd_oracle)

    tr = sub.add_parser("trial", help="variational upper-bound state")
    tr.add_argument("--N", type=int, default=2)
    tr.add_argument("--L", type=float, required=True)
    tr.add_argument("--config")
    tr.add_argument("--b", default="auto", help="healing scale or 'auto'")
    tr.add_argument("--out")
    tr.set_defaults(func=cmd_trial)

    va = sub.add_parser("validate", help="expansion envelope vs oracle")
    va.add_argument("--N", type=int, required=True)
    va.add_argument("--L", type=float, required=True)
    va.add_argument("--config")
    va.add_argument("--symmetry", choices=("bose", "fermi", "anyon"), default="bose")
    va.add_argument("--c", type=float, default=0.0, help="contact coupling")
    va.add_argument("--kappa", type=float, default=None, help="anyon phase in [0, pi]")
    va.add_argument("--no-oracle", action="store_true")
    va.add_argument("--refine", type=int, default=3)
    va.add_argument("--M", type=int, default=64)
    va.add_argument("--c-upper", type=float, default=1.0)
    va.add_argument("--c-lower", type=float, default=1.0)
    va.add_argument("--out")
    va.set_defaults(func=cmd_validate)

    sw = sub.add_parser("sweep", help="parameter sweeps to CSV/JSON + figures")
    sw.add_argument("--gamma", help="'1,10,100' or 'lo:hi:n'")
    sw.add_argument("--kappa", help="statistics values; with --kappa-pi, in units of pi")
    sw.add_argument("--kappa-pi", action="store_true")
    sw.add_argument("--c", type=float, default=1.0)
    sw.add_argument("--config")
    sw.add_argument("--nodes", type=int, default=200)
    sw.set_defaults(func=cmd_sweep)

    ac = sub.add_parser("acceptance", help="run the acceptance suite")
    ac.add_argument("--only", help="comma list of criterion numbers")
    ac.set_defaults(func=cmd_acceptance)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    with warnings.catch_warnings():
        warnings.simplefilter("default")
        return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
