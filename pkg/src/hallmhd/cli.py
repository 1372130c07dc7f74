"""Command-line front end: simulate, verify, scaling, uniqueness, analyze."""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .config import RunConfig, load_config
from .diagnostics import existence_time, scaling_check
from .snapshots import snapshot_name, write_diagnostics, write_snapshot
from .solver import State, run
from .spectral import SpectralField
from .uniqueness import gronwall_check
from .verification import run_verification


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "config.txt"), "w", encoding="utf-8") as fh:
        fh.write(cfg.to_text())

    initial = cfg.initial_state()
    solver_cfg = cfg.solver_config()

    def sink(step, state):
        write_snapshot(os.path.join(args.out, snapshot_name(step)), state)

    final, log = run(initial, solver_cfg, sinks=[sink])
    write_diagnostics(args.out, cfg.physical_params(), cfg.sobolev())
    print(f"final time t={final.t:.17g}")
    if log.halted:
        print(f"halted early: {log.halt_reason}")
    if log.projection_drift:
        worst = max(d for _, d in log.projection_drift)
        print(f"max safety-projection magnitude on b: {worst:.3e}")
    return 0


def _cmd_verify(args) -> int:
    cfg = load_config(args.config)
    results = run_verification(cfg)
    all_ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: {r.detail}")
        all_ok &= r.passed
    return 0 if all_ok else 1


def _cmd_scaling(args) -> int:
    cfg = load_config(args.config)
    grid = cfg.grid()
    cutoff = (2.0 / 3.0) * (grid.dims / 2)
    band = min(
        cfg["init.band"] or cutoff / args.lam - 1.0, cutoff / args.lam - 1.0
    )
    from .solver import make_initial

    initial = make_initial(
        cfg["init.kind"], grid, cfg["init.seed"],
        (cfg["init.target_u"], cfg["init.target_b"]), cfg.sobolev(), band=band,
    )
    mode = "mhd" if args.mode == "mhd" else "hall_only"
    residual = scaling_check(mode, args.lam, initial, cfg.solver_config())
    print(f"scaling residual (mode={mode}, lambda={args.lam}): {residual:.17g}")
    return 0


def _cmd_uniqueness(args) -> int:
    cfg = load_config(args.config)
    solver_cfg = cfg.solver_config()
    initial = cfg.initial_state()
    perturbed = State(
        SpectralField(initial.grid, initial.u.coeffs * (1.0 + args.perturb)),
        SpectralField(initial.grid, initial.b.coeffs * (1.0 + args.perturb)),
        0.0,
    )

    trace1, trace2 = [], []
    run(initial, solver_cfg, sinks=[lambda i, st: trace1.append(st.copy())])
    run(perturbed, solver_cfg, sinks=[lambda i, st: trace2.append(st.copy())])

    C = cfg["calibration.C"]
    C_nu_mu = cfg["calibration.C_nu_mu"]
    probe = gronwall_check(trace1, trace2, cfg.sobolev(), C, max(C_nu_mu, 1.0))
    if C_nu_mu <= 0:
        C_nu_mu = probe.minimal_C_nu_mu
    result = gronwall_check(trace1, trace2, cfg.sobolev(), C, C_nu_mu)
    print(f"difference energy at t=0: {result.energy[0]:.17g}")
    print(f"difference energy at t={result.t[-1]:.17g}: {result.energy[-1]:.17g}")
    print(f"minimal passing C_nu_mu: {result.minimal_C_nu_mu:.17g}")
    print(f"gronwall bound {'holds' if result.passed else 'VIOLATED'} with C_nu_mu={C_nu_mu:.17g}")
    return 0 if result.passed else 1


def _cmd_analyze(args) -> int:
    cfg = load_config(os.path.join(args.run, "config.txt"))
    out = args.out or args.run
    os.makedirs(out, exist_ok=True)
    write_diagnostics(args.run, cfg.physical_params(), cfg.sobolev(), out_dir=out)

    from .snapshots import list_snapshots, read_snapshot

    states = [read_snapshot(p) for p in list_snapshots(args.run)]
    from .littlewood_paley import dyadic_sobolev_norm

    sob = cfg.sobolev()
    psi0 = (
        dyadic_sobolev_norm(states[0].u, sob.s) ** 2
        + dyadic_sobolev_norm(states[0].b, sob.r) ** 2
    )
    horizon = states[-1].t
    if psi0 > 0:
        est = existence_time(
            psi0, cfg["calibration.C"], cfg["calibration.gamma_low"],
            cfg["calibration.gamma_high"],
        )
        print(f"predicted existence time T={est.T:.17g}, observed horizon {horizon:.17g}")
    else:
        print(f"zero initial data; observed horizon {horizon:.17g}")
    if len(states) >= 3:
        from .diagnostics import energy_balance_residual

        _, ru, rb = energy_balance_residual(states, cfg.physical_params(), sob)
        print(f"max energy-balance residual: u {np.max(ru):.3e}, b {np.max(rb):.3e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hmhd",
        description="Pseudo-spectral Hall-MHD solver and verification toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the solver, write snapshots + CSVs")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="run the identity and estimate sweeps")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("scaling", help="check a rescaling symmetry")
    p.add_argument("--mode", choices=["mhd", "hall"], required=True)
    p.add_argument("--lambda", dest="lam", type=int, choices=[2, 4], required=True)
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_scaling)

    p = sub.add_parser("uniqueness", help="paired runs + Gronwall report")
    p.add_argument("--config", required=True)
    p.add_argument("--perturb", type=float, required=True)
    p.set_defaults(func=_cmd_uniqueness)

    p = sub.add_parser("analyze", help="recompute diagnostics from snapshots")
    p.add_argument("--run", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_analyze)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
