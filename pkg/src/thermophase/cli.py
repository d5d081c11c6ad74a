"""Batch command line front end.

Exit codes: 0 success, 1 verification failure (or every minimize row
failed), 2 invalid input, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import oracle, reports, thermal, wkb
from .config import (
    ConfigError,
    LambdaMode,
    ModelConfig,
    NormConvention,
    Parity,
    default_config,
    load_config,
    validate,
)
from .errors import DomainError, NonConvergenceError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NONCONVERGENCE = 0, 1, 2, 3


def _temps(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid temperature list {text!r}") from None


def _mode(text):
    try:
        return LambdaMode.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _model_options(p):
    g = p.add_argument_group("model")
    g.add_argument("--config", help="JSON config file (keys as in ModelConfig)")
    g.add_argument("--parity", choices=[x.value for x in Parity])
    g.add_argument("--mode", type=_mode, help="fixed_epsilon | self_consistent | fixed_lambda=<value>")
    g.add_argument("--norm", dest="norm_convention", choices=[x.value for x in NormConvention])
    g.add_argument("--rm", dest="r_m", type=float, help="upper limit of the phase integral, bohr")
    g.add_argument("--theta-th", type=float)
    g.add_argument("--t-ref", type=float)
    g.add_argument("--lambda-ref", type=float)
    g.add_argument("--mass", type=float)
    g.add_argument("--out", default="-", help="output file (default stdout)")
    g.add_argument("--json", action="store_true", help="write a JSON envelope instead of CSV")
    g.add_argument("--workers", type=int, default=1)


def _grid_options(p, temps_default="100,200,300", r_min=0.0, r_max=8.0, r_step=0.01):
    p.add_argument("--temps", type=_temps, default=_temps(temps_default))
    p.add_argument("--r-min", type=float, default=r_min)
    p.add_argument("--r-max", type=float, default=r_max)
    p.add_argument("--r-step", type=float, default=r_step)


def build_parser():
    parser = argparse.ArgumentParser(prog="thermophase", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="tabulate a quantity over a grid")
    ssub = sweep.add_subparsers(dest="kind", required=True)
    g = ssub.add_parser("gauge", help="gauge potential vs R at several temperatures")
    _model_options(g)
    _grid_options(g)
    ph = ssub.add_parser("phase", help="geometric phase vs temperature")
    _model_options(ph)
    ph.add_argument("--t-min", type=float, default=100.0)
    ph.add_argument("--t-max", type=float, default=300.0)
    ph.add_argument("--t-step", type=float, default=5.0)
    v = ssub.add_parser("veff", help="effective potential vs R at several temperatures")
    _model_options(v)
    _grid_options(v, r_min=0.5, r_max=8.0)
    lam = ssub.add_parser("lambda", help="orbital exponent vs temperature")
    _model_options(lam)
    lam.add_argument("--t-min", type=float, default=100.0)
    lam.add_argument("--t-max", type=float, default=300.0)
    lam.add_argument("--t-step", type=float, default=10.0)
    lam.add_argument("--r", dest="r_sep", type=float, default=2.0, help="R used in self-consistent mode")

    m = sub.add_parser("minimize", help="equilibrium bond length per temperature")
    _model_options(m)
    m.add_argument("--temps", type=_temps, default=_temps("100,200,300"))
    m.add_argument("--r-min", type=float, default=1.0)
    m.add_argument("--r-max", type=float, default=6.0)

    ver = sub.add_parser("verify", help="run every oracle cross-check")
    _model_options(ver)
    ver.add_argument("--regenerate", action="store_true", help="rewrite the golden file first")
    ver.add_argument("--golden", default=str(oracle.GOLDEN_PATH))

    w = sub.add_parser("wkb", help="semiclassical actions for a tabulated potential")
    w.add_argument("input", help="CSV with columns r,V and optional A or T")
    w.add_argument("--epsilon", type=float, required=True)
    w.add_argument("--orders", type=int, choices=(0, 1, 2), default=2)
    w.add_argument("--hbar", type=float, default=1.0)
    w.add_argument("--out", default="-")
    return parser


def resolve_config(args) -> ModelConfig:
    config = load_config(args.config) if getattr(args, "config", None) else default_config()
    overrides = {}
    for name in ("theta_th", "t_ref", "lambda_ref", "mass", "r_m"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "parity", None):
        overrides["parity"] = Parity(args.parity)
    if getattr(args, "mode", None):
        overrides["mode"] = args.mode
    if getattr(args, "norm_convention", None):
        overrides["norm_convention"] = NormConvention(args.norm_convention)
    config = config.replace(**overrides)
    problems = validate(config)
    if problems:
        raise ConfigError(problems)
    return config


def _emit(text, out):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _render(result, args):
    return result.to_json() + "\n" if args.json else result.to_csv()


def _run_sweep(args, config):
    if args.kind == "gauge":
        res = reports.sweep_gauge(args.temps, args.r_min, args.r_max, args.r_step, config, args.workers)
    elif args.kind == "phase":
        res = reports.sweep_phase(args.t_min, args.t_max, args.t_step, config.r_m, config, args.workers)
    elif args.kind == "veff":
        res = reports.sweep_veff(args.temps, args.r_min, args.r_max, args.r_step, config, args.workers)
    else:
        res = reports.sweep_lambda(args.t_min, args.t_max, args.t_step, config, args.r_sep)
    _emit(_render(res, args), args.out)
    return EXIT_OK


def _run_minimize(args, config):
    res, all_failed = reports.minimize_table(args.temps, config, bracket=(args.r_min, args.r_max))
    _emit(_render(res, args), args.out)
    return EXIT_FAIL if all_failed else EXIT_OK


def _run_verify(args, config):
    if args.regenerate:
        reports.regenerate_golden(config.quadrature, args.golden)
        print(f"golden file rewritten: {args.golden}", file=sys.stderr)
    report = reports.verify(config, golden_path=args.golden)
    _emit(report.table() + "\n", args.out)
    return report.exit_code


def _read_wkb_input(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.DictReader(line for line in fh if not line.startswith("#"))]
    if not rows or "r" not in rows[0] or "V" not in rows[0]:
        raise DomainError("wkb input needs a header with columns r,V")
    cols = {k: np.array([float(row[k]) for row in rows]) for k in rows[0]}
    return cols


def _run_wkb(args):
    cols = _read_wkb_input(args.input)
    grid = wkb.RadialGrid(cols["r"])
    if "A" in cols:
        amp = cols["A"]
    elif "T" in cols:
        amp, _ = thermal.boltzmann_amplitude(grid.nodes, cols["T"], args.epsilon, "normalize")
    else:
        amp = None
    p = wkb.WkbProblem(grid, cols["V"], args.epsilon, amp)
    sol = wkb.solve(p, args.orders, hbar=args.hbar)
    phi = wkb.assemble_wavefunction(p, sol, args.hbar)
    lines = ["r,S0,S1,S2,A,Re_phi,Im_phi"]
    for i, r in enumerate(grid.nodes):
        vals = (r, sol.s0[i], sol.s1[i], sol.s2[i], p.amplitude[i], phi[i].real, phi[i].imag)
        lines.append(",".join(f"{float(v):.17g}" for v in vals))
    _emit("\n".join(lines) + "\n", args.out)
    print(f"residual_norm={sol.residual_norm:.17g}", file=sys.stderr)
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "wkb":
            return _run_wkb(args)
        config = resolve_config(args)
        if args.command == "sweep":
            return _run_sweep(args, config)
        if args.command == "minimize":
            return _run_minimize(args, config)
        return _run_verify(args, config)
    except ConfigError as exc:
        for v in exc.violations:
            print(f"config error: {v}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
