"""Command line front end: ``pwlattice [global flags] SUBCOMMAND [options]``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError, NoConvergence, PWError
from .experiment import (
    RunArtifacts,
    Table,
    _context,
    _density_outputs,
    _setup,
    build_band,
    build_sampling_set,
    load_config,
    run,
    verify_suite,
)
from .lattice import GridFunction, max_holomorphicity_residual
from .sampling import necessary_condition, sample, sufficient_condition
from .spectral import PWFunction, analyze, kernel, kernel_closed_form, project

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

EPILOG = """\
exit codes: 0 success, 1 a guaranteed check failed, 2 configuration error,
            3 numerical error (pole, no convergence under guarantee, band leakage)

CSV tables (floats with 17 significant digits, empty cell = undefined):
  convergence     iteration, residual, ratio        (ratio = residual_k / residual_{k-1})
  error_vs_delta  delta, delta_actual, bound_ratio, measured_ratio, iterations,
                  final_error, true_error, guarantee, converged
  density         r, ratio                           (min counting ratio over balls of radius r)
  checks          name, lhs, bound, ok, guarantee
  layer0          m, re, im, abs                     (height-0 values)
  spectrum        t, re, im, abs
  kernel          u, re, im, closed_form             (K_center(u, v) along the probe height)
  lambda          lambda, parity, re, im             (samples F(lambda, 0))

config keys (JSON): name, alpha (number or expression like "pi/8"), L, window
[m_min, m_max, n_min, n_max], f_spec {kind: bump|indicator|single_frequency|
custom_grid|random, ...}, lambda_spec {kind: full|two_progression|random_gaps|
explicit, ...}, tol, max_iter, seed, outputs, sweep_deltas, r_max.
"""


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, (complex, np.complexfloating)):
        return [_jsonable(v.real), _jsonable(v.imag)]
    return v


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "" if math.isnan(v) else format(float(v), ".17g")
    return str(v)


def table_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _layer_table(grid: GridFunction, n: int = 0) -> Table:
    vals = grid.layer(n)
    return Table(("m", "re", "im", "abs"),
                 [(int(m), v.real, v.imag, abs(v)) for m, v in zip(grid.m_range, vals)])


# -- subcommands ------------------------------------------------------------

def cmd_synth(cfg, args) -> RunArtifacts:
    band, f, smooth, F = _setup(cfg)
    art = RunArtifacts(grid=F.grid)
    art.reports["synthesis"] = {
        "name": "synthesis", "experiment": cfg.name, "alpha": cfg.alpha, "L": cfg.L,
        "window": list(cfg.window), "f_kind": cfg.f_spec["kind"], "smooth": smooth,
        "pw_norm": F.pw_norm, "layer0_norm": F.layer0_norm, "spectral_norm": f.norm,
        "max_abs": float(np.max(np.abs(F.grid.values))),
        "holomorphicity_residual": max_holomorphicity_residual(F.grid),
        "growth_base": band.growth_base}
    if getattr(args, "out", None):
        art.reports["grid"] = F.grid.to_dict()
        art.reports["spectrum"] = f.to_dict()
    art.tables["layer0"] = _layer_table(F.grid)
    return art


def cmd_analyze(cfg, args) -> RunArtifacts:
    band = build_band(cfg)
    art = RunArtifacts()
    original = None
    if args.input:
        try:
            grid = GridFunction.from_dict(json.loads(Path(args.input).read_text()))
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot read grid: {exc}", "--input") from None
        F = PWFunction(grid, band)
    else:
        _, original, _, F = _setup(cfg)
    with _context(cfg, "--tau-leak"):
        g = analyze(F, cfg.L, tau_leak=args.tau_leak)
    report = {"name": "analysis", "experiment": cfg.name, "L": cfg.L, "leakage": g.leakage,
              "tau_leak": args.tau_leak, "spectral_norm": g.norm, "layer0_norm": F.layer0_norm}
    if original is not None:
        report["max_deviation"] = float(np.max(np.abs(g.values - original.values)))
    art.reports["analysis"] = report
    art.tables["spectrum"] = Table(("t", "re", "im", "abs"),
                                   [(t, v.real, v.imag, abs(v)) for t, v in zip(g.grid, g.values)])
    art.grid = F.grid
    return art


def cmd_kernel(cfg, args) -> RunArtifacts:
    band = build_band(cfg)
    (m, n), (u, v) = args.center, args.probe
    val = kernel(((m, n), (u, v)), band, cfg.L)
    report = {"name": "kernel", "experiment": cfg.name, "center": [m, n], "probe": [u, v],
              "value": val, "alpha": cfg.alpha, "L": cfg.L}
    on_line = v == -n
    if on_line:
        cf = kernel_closed_form(u - m, cfg.alpha)
        report.update(closed_form=cf, lhs=abs(val - cf), bound=1e-6, ok=bool(abs(val - cf) <= 1e-6),
                      guarantee=abs(u - m) <= 8)
    rows = []
    for uu in range(u - args.span, u + args.span + 1):
        kv = kernel(((m, n), (uu, v)), band, cfg.L)
        rows.append((uu, kv.real, kv.imag, kernel_closed_form(uu - m, cfg.alpha) if on_line else None))
    art = RunArtifacts()
    art.reports["kernel"] = report
    art.tables["kernel"] = Table(("u", "re", "im", "closed_form"), rows)
    return art


def cmd_project(cfg, args) -> RunArtifacts:
    band = build_band(cfg)
    m_min, m_max = cfg.window[:2]
    if args.input:
        try:
            pairs = np.asarray(json.loads(Path(args.input).read_text()), dtype=float).reshape(-1, 2)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read sequence: {exc}", "--input") from None
        if pairs.shape[0] != m_max - m_min + 1:
            raise ConfigError(f"sequence length {pairs.shape[0]} does not match the window", "--input")
        g = pairs[:, 0] + 1j * pairs[:, 1]
    else:
        g = np.zeros(m_max - m_min + 1, dtype=complex)
        g[-m_min] = 1.0
    with _context(cfg, "L"):
        P = project(g, m_min, band, cfg.L, heights=(0, 0), weights=args.weights)
        PP = project(P, weights=args.weights)
    report = {"name": "projection", "experiment": cfg.name, "weights": args.weights,
              "input_norm": float(np.linalg.norm(g)), "output_norm": P.layer0_norm,
              "idempotence_defect": float(np.linalg.norm(PP.coefficients - P.coefficients)
                                          / max(np.linalg.norm(P.coefficients), 1e-300))}
    if not args.input:
        ks = P.grid.m_range
        report["sinc_deviation"] = float(np.max(np.abs(P.layer(0) - kernel_closed_form(ks, cfg.alpha))))
    art = RunArtifacts(grid=P.grid)
    art.reports["projection"] = report
    art.tables["layer0"] = _layer_table(P.grid)
    return art


def cmd_sample(cfg, args) -> RunArtifacts:
    band, f, smooth, F = _setup(cfg)
    s = build_sampling_set(cfg)
    vals = sample(F, s)
    art = RunArtifacts()
    art.reports["sampling_set"] = {**s.to_dict(), "name": "sampling_set", "experiment": cfg.name,
                                   "seed": cfg.lambda_spec.get("seed", cfg.seed), "size": len(s),
                                   "sufficient_condition": sufficient_condition(s, band),
                                   "necessary_condition": necessary_condition(s, band)}
    art.tables["lambda"] = Table(("lambda", "parity", "re", "im"),
                                 [(int(l), int(l % 2), v.real, v.imag) for l, v in zip(s.lam, vals)])
    return art


def cmd_density(cfg, args) -> RunArtifacts:
    band = build_band(cfg)
    s = build_sampling_set(cfg)
    art = RunArtifacts()
    art.reports["density"], art.tables["density"] = _density_outputs(cfg, s, band)
    return art


def cmd_reconstruct(cfg, args) -> RunArtifacts:
    return run(cfg)


def cmd_verify(cfg, args) -> RunArtifacts:
    return verify_suite(cfg)


def _shared_flags() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subparser from clobbering a flag given before the subcommand
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global flags")
    g.add_argument("--config", metavar="PATH", default=argparse.SUPPRESS, help="JSON experiment config")
    g.add_argument("--seed", type=int, metavar="N", default=argparse.SUPPRESS, help="random seed")
    g.add_argument("--out", metavar="DIR", default=argparse.SUPPRESS,
                   help="write reports (*.json), tables (*.csv) and figures (*.png) here")
    g.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print JSON reports to stdout")
    g.add_argument("--csv", action="store_true", default=argparse.SUPPRESS, help="print CSV tables to stdout")
    g.add_argument("--set", action="append", metavar="KEY=VALUE", default=argparse.SUPPRESS,
                   help="override a config key (dotted keys reach into f_spec / lambda_spec)")
    g.add_argument("--no-figures", action="store_true", default=argparse.SUPPRESS,
                   help="skip PNG figures when writing to --out")
    return p


def _pair(text: str):
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected M,N got {text!r}") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = argparse.ArgumentParser(
        prog="pwlattice", parents=[shared], epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Discrete Paley-Wiener spaces on Z^2: synthesis, kernels, sampling and reconstruction.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[shared], help=help_text, description=help_text, epilog=EPILOG,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=func)
        return sp

    add("synth", cmd_synth, "synthesize F from the configured spectral function")
    sp = add("analyze", cmd_analyze, "height-0 spectrum of a grid function (default: the synthesized F)")
    sp.add_argument("--input", metavar="PATH", help="grid JSON {window, values} as written by synth")
    sp.add_argument("--tau-leak", type=float, default=1e-8, help="admissible out-of-band mass")
    sp = add("kernel", cmd_kernel, "evaluate the reproducing kernel K_center(probe)")
    sp.add_argument("--center", type=_pair, default=(0, 0), metavar="M,N")
    sp.add_argument("--probe", type=_pair, default=(0, 0), metavar="U,V")
    sp.add_argument("--span", type=int, default=16, help="half-length of the tabulated kernel row")
    sp = add("project", cmd_project, "project a height-0 sequence onto PW_alpha (default: unit impulse at 0)")
    sp.add_argument("--input", metavar="PATH", help="JSON list of [re, im] pairs over the window columns")
    sp.add_argument("--weights", choices=("indicator", "trapezoid"), default="indicator")
    add("sample", cmd_sample, "build the sampling set and sample F on it")
    add("reconstruct", cmd_reconstruct, "reconstruct F from its samples (plus the error-vs-delta sweep)")
    add("verify", cmd_verify, "run every checker; exit 1 if a guaranteed check fails")
    add("density", cmd_density, "finite-radius Beurling density of the sampling set")
    return parser


def _emit(art: RunArtifacts, args) -> None:
    out = getattr(args, "out", None)
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        for name, rep in art.reports.items():
            (d / f"{name}.json").write_text(dumps(rep) + "\n")
        for name, table in art.tables.items():
            (d / f"{name}.csv").write_text(table_csv(table))
        if not getattr(args, "no_figures", False):
            from .plotting import render_figures
            render_figures(art, d)
    if getattr(args, "json", False):
        print(dumps({k: v for k, v in art.reports.items() if k not in ("grid", "spectrum")}))
    if getattr(args, "csv", False):
        for name, table in art.tables.items():
            print(f"# {name}")
            sys.stdout.write(table_csv(table))
    if not (getattr(args, "json", False) or getattr(args, "csv", False)):
        for name, rep in art.reports.items():
            if name in ("grid", "spectrum"):
                continue
            flag = "" if "ok" not in rep else ("ok" if rep["ok"] else "FAIL")
            if flag and not rep.get("guarantee", True):
                flag += " (diagnostic)"
            lhs = rep.get("lhs")
            lhs_txt = f" lhs={lhs:.6g}" if isinstance(lhs, float) else ""
            print(f"{name}: {flag}{lhs_txt}".rstrip())


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(getattr(args, "config", None), getattr(args, "set", None) or (),
                          getattr(args, "seed", None))
        art = args.func(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoConvergence as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (PWError, ArithmeticError) as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(art, args)
    if not art.ok:
        print(f"guaranteed check(s) failed: {', '.join(art.failures)}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
