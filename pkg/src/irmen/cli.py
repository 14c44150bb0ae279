"""Command-line front end: device reports, single simulations, and sweeps.

Exit codes: 0 success, 2 config/usage error, 3 I/O error, 4 numerical
failure (non-finite state).  The IRMEN_SEED environment variable, when
set, overrides --seed.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .experiments import Workload, energy_delay, monte_carlo, sweep_report
from .io import (
    fmt9,
    parse_workload,
    read_image,
    summary_lines,
    write_image,
    write_manifest,
    write_nodes_csv,
    write_sweep_csv,
    write_trace_csv,
)
from .network import NumericalError, build_grid, init_state, run_until
from .params import CALIBRATION_FIELDS, ParamError, Params, derive_quantities, load_params

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


def _load_config(path: str | None) -> Params:
    if path is None:
        return Params()
    with open(path, encoding="utf-8") as f:
        return load_params(f.read())


def _resolve_seed(args: argparse.Namespace) -> int:
    env = os.environ.get("IRMEN_SEED")
    if env is not None:
        return int(env)
    return args.seed


def report_lines(p: Params) -> list[str]:
    d = derive_quantities(p)
    lines = [
        f"# irmen {__version__} device report",
        f"H_K_Oe = {fmt9(d.H_K_mag)}",
        f"Delta_barrier = {fmt9(d.Delta_barrier)}",
        f"tau_N_s = {fmt9(d.tau_N)}",
        f"sigma_T_Oe = {fmt9(d.sigma_T)}",
        f"R_IR_x_Ohm = {fmt9(d.R_IR_x)}",
        f"R_IR_z_Ohm = {fmt9(d.R_IR_z)}",
        f"R_X_my1_Ohm = {fmt9(d.R_X_at_my1)}",
        f"I_d_A = {fmt9(d.I_d)}",
        f"H_ME_at_VDD_Oe = {fmt9(d.H_ME_at_VDD)}",
        "# calibration values (not tabulated material data):",
    ]
    for name in CALIBRATION_FIELDS:
        lines.append(f"# {name} = {fmt9(getattr(p, name))}")
    return lines


def _cmd_report(args: argparse.Namespace) -> int:
    p = _load_config(args.config)
    lines = report_lines(p)
    print("\n".join(lines))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "device_report.txt"), "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")
        write_manifest(os.path.join(args.out, "manifest.json"), command="report",
                       config_path=args.config, seed=0, out_dir=args.out,
                       version=__version__, argv=sys.argv[1:])
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    p = _load_config(args.config)
    image = read_image(args.image)
    seed = _resolve_seed(args)
    targets = tuple(float(t) for t in args.targets.split(","))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    rows, cols = image.shape

    from .experiments import apply_noise
    noisy = apply_noise(image, args.noise, rng)
    net = build_grid(rows, cols, p)
    state = init_state(noisy, p, rng)
    trace = run_until(state, net, target_image=image, max_t=args.max_t * 1e-12,
                      rng=rng, sample_every=args.sample_every, record_nodes=args.nodes)

    os.makedirs(args.out, exist_ok=True)
    write_trace_csv(os.path.join(args.out, "trace.csv"), trace)
    if args.nodes:
        write_nodes_csv(os.path.join(args.out, "nodes.csv"), trace, rows, cols)
    final = np.where(state.m[:, 1] >= 0, 1, -1).reshape(rows, cols)
    write_image(os.path.join(args.out, "filtered.txt"), final)
    per_target = {t: energy_delay(trace, t) for t in targets}
    lines = summary_lines(trace, targets, per_target)
    with open(os.path.join(args.out, "summary.txt"), "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    write_manifest(os.path.join(args.out, "manifest.json"), command="simulate",
                   config_path=args.config, seed=seed, out_dir=args.out,
                   version=__version__, argv=sys.argv[1:])
    print("\n".join(lines))
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    p = _load_config(args.config)
    with open(args.workload, encoding="utf-8") as f:
        workload = parse_workload(f.read(), base_dir=os.path.dirname(args.workload) or ".")
    env = os.environ.get("IRMEN_SEED")
    if env is not None:
        from dataclasses import replace
        workload = replace(workload, seed=int(env))
    stats = monte_carlo(workload, p, jobs=args.jobs)
    rows = sweep_report(stats)
    os.makedirs(args.out, exist_ok=True)
    write_sweep_csv(os.path.join(args.out, "sweep.csv"), rows)
    write_manifest(os.path.join(args.out, "manifest.json"), command="sweep",
                   config_path=args.config, seed=workload.seed, out_dir=args.out,
                   version=__version__, argv=sys.argv[1:])
    n_failed = sum(c.n_failed for c in stats.cells.values())
    print(f"wrote {len(rows)} sweep rows to {os.path.join(args.out, 'sweep.csv')}"
          + (f" ({n_failed} failed replicas)" if n_failed else ""))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="irmen",
                                 description="IRMEN cellular neural network simulator")
    ap.add_argument("--version", action="version", version=f"irmen {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("report", help="print derived device quantities")
    rep.add_argument("--config", default=None)
    rep.add_argument("--out", default=None)
    rep.set_defaults(func=_cmd_report)

    sim = sub.add_parser("simulate", help="run one filtering simulation")
    sim.add_argument("--config", default=None)
    sim.add_argument("--image", required=True)
    sim.add_argument("--noise", type=float, default=0.0)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True)
    sim.add_argument("--max-t", type=float, default=500.0, dest="max_t",
                     help="simulation horizon [ps]")
    sim.add_argument("--targets", default="5.5", help="comma-separated error targets [%%]")
    sim.add_argument("--sample-every", type=int, default=10, dest="sample_every")
    sim.add_argument("--nodes", action="store_true", help="write per-node m_y series")
    sim.add_argument("--jobs", type=int, default=1)
    sim.set_defaults(func=_cmd_simulate)

    swp = sub.add_parser("sweep", help="run a Monte Carlo parameter sweep")
    swp.add_argument("--config", default=None)
    swp.add_argument("--workload", required=True)
    swp.add_argument("--out", required=True)
    swp.add_argument("--jobs", type=int, default=1)
    swp.set_defaults(func=_cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ParamError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
