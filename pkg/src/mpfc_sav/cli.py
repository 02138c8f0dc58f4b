"""Command-line entry point.

    mpfc-sav simulate    --config run.cfg [--out DIR] [--scheme cn|first-order]
    mpfc-sav converge    [--config presets/convergence.cfg] [--resolutions 20,40,80,160]
    mpfc-sav energy-demo [--config presets/energy.cfg]
    mpfc-sav check

Exit status: 0 success, 1 invariant violation or numerical failure, 2 usage or
configuration error.
"""
import argparse
import os
import sys
from dataclasses import replace
from importlib import resources

import numpy as np

from .checks import run_checks
from .config import load_config, parse_config
from .errors import ConfigError, MPFCError
from .experiments import run_convergence_study, run_simulation
from .io import write_convergence_csv, write_energy_csv, write_snapshot

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2

PSEUDO_ENERGY_RTOL = 1e-10
MASS_RTOL = 1e-10


def bundled_preset(name):
    return parse_config(resources.files("mpfc_sav").joinpath("presets", name).read_text(encoding="utf-8"))


def _resolutions(text):
    try:
        values = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or any(v < 2 for v in values):
        raise argparse.ArgumentTypeError("resolutions must be integers >= 2")
    return values


def build_parser():
    parser = argparse.ArgumentParser(prog="mpfc-sav", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="{simulate,converge,energy-demo,check}")

    def common(p, config_required=False):
        p.add_argument("--config", required=config_required, help="configuration file")
        p.add_argument("--out", help="output directory (overrides io.out_dir)")
        p.add_argument("--scheme", choices=("cn", "first-order"), help="time stepping scheme")

    common(sub.add_parser("simulate", help="run one simulation"), config_required=True)
    p = sub.add_parser("converge", help="Cauchy-error convergence study")
    common(p)
    p.add_argument("--resolutions", type=_resolutions, default=(20, 40, 80, 160))
    p.add_argument("--workers", type=int, default=1, help="resolution pairs run in parallel")
    common(sub.add_parser("energy-demo", help="original vs pseudo energy evolution"))
    p = sub.add_parser("check", help="run the invariant suite")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _load(args, preset):
    cfg = load_config(args.config) if args.config else bundled_preset(preset)
    if getattr(args, "scheme", None):
        cfg = replace(cfg, scheme=args.scheme.replace("-", "_"))
    out = args.out or cfg.io.out_dir
    os.makedirs(out, exist_ok=True)
    return cfg, out


def cmd_simulate(args):
    cfg, out = _load(args, None)
    n_final = cfg.time.n_steps
    stride = cfg.io.snapshot_stride

    def on_state(state):
        if (stride and state.n % stride == 0) or state.n == n_final:
            write_snapshot(cfg.grid, state.z, os.path.join(out, f"snapshot_{state.n:06d}.bin"))

    series = run_simulation(cfg, on_state=on_state, record_stride=cfg.io.energy_stride)
    write_energy_csv(series, os.path.join(out, "energy.csv"))
    print(f"{n_final} steps, final t = {series.t[-1]:.6g}; wrote {out}/energy.csv")
    return EXIT_OK


def cmd_converge(args):
    cfg, out = _load(args, "convergence.cfg")
    rows = run_convergence_study(cfg, args.resolutions, max_workers=args.workers)
    path = os.path.join(out, "convergence.csv")
    write_convergence_csv(rows, path)
    print(f"{'N':>5} {'err_phi':>10} {'rate':>5} {'err_gradlap':>12} {'rate':>5} {'err_r':>10} {'rate':>5}")
    for r in rows:
        rate = lambda v: "  ---" if v is None else f"{v:5.2f}"  # noqa: E731
        print(
            f"{r.n:>5} {r.err_phi:10.3e} {rate(r.rate_phi)} {r.err_gradlap:12.3e} "
            f"{rate(r.rate_gradlap)} {r.err_r:10.3e} {rate(r.rate_r)}"
        )
    print(f"wrote {path}")
    return EXIT_OK


def cmd_energy_demo(args):
    cfg, out = _load(args, "energy.cfg")
    series = run_simulation(cfg, record_stride=cfg.io.energy_stride)
    path = os.path.join(out, "energy.csv")
    write_energy_csv(series, path)
    pseudo = np.asarray(series.energy_pseudo_tilde)
    original = np.asarray(series.energy_original)
    masses = np.asarray(series.mass)
    worst_rise = float(np.max(np.diff(pseudo) / np.abs(pseudo[:-1]))) if len(pseudo) > 1 else 0.0
    rises = int(np.sum(np.diff(original) > 0))
    mass_drift = float(np.max(np.abs(masses - masses[0])) / max(abs(masses[0]), 1e-300))
    print(f"pseudo energy: {pseudo[0]:.10g} -> {pseudo[-1]:.10g}, largest relative rise {worst_rise:.2e}")
    print(f"original energy: {original[0]:.10g} -> {original[-1]:.10g}, increasing intervals: {rises}")
    print(f"mass drift (relative): {mass_drift:.2e}")
    print(f"wrote {path}")
    ok = worst_rise <= PSEUDO_ENERGY_RTOL and mass_drift <= MASS_RTOL
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_check(args):
    results = run_checks(seed=args.seed)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAILURE if failed else EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "converge": cmd_converge,
    "energy-demo": cmd_energy_demo,
    "check": cmd_check,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, OSError) as exc:
        print(f"mpfc-sav: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MPFCError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"mpfc-sav: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
