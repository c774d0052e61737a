"""Command-line entry point: ``polyhom {expand,ball,cex,diagnose,oracle}``.

Every subcommand writes its artifacts into ``--out`` and echoes the main JSON
report on stdout.  Exit status: 0 ok, 2 invalid input, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io as pio
from .bivariate import BivariatePoly, parse_poly
from .cma_model import ball_benchmark, default_grid
from .counterexample import (CexState, build_cex_series, cex_residual, growth_ledger,
                             residual_vanishes_below_truncation, _log_abs)
from .diagnostics import UNKNOWN, GrowthFit, gevrey_fit
from .fuchsian import solve_polyhom
from .numeric_oracle import OracleError, fit_coefficients, manufactured, solve_bvp
from .series import PolyhomSeries

log = logging.getLogger("polyhom")

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polyhom", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--out", default="results", help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("expand", parents=[common], help="polyhomogeneous expansion of a model problem")
    p.add_argument("--config", help="key=value problem file")
    p.add_argument("--n", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--form", choices=["d", "t", "v1"])
    p.add_argument("--forcing", help='e.g. "2:1,3:1" or "4.1:1/2" (power[.logdeg]:coeff)')
    p.add_argument("--free", help='resonant data, e.g. "3=0"')
    p.add_argument("--C1", help='perturbation coefficient, e.g. "0:-1"')
    p.add_argument("--Cd", help='perturbation coefficient, e.g. "0:-1"')
    p.add_argument("--nonlinearity", choices=["none", "model"])
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="config override, repeatable")

    p = sub.add_parser("ball", parents=[common], help="unit-ball benchmark")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--K", type=int, default=10)
    p.add_argument("--grid-points", type=int, default=20)

    p = sub.add_parser("cex", parents=[common], help="divergent counterexample series")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--seed-poly", help='seed w, e.g. "d:1, t^2:-1/2"')
    p.add_argument("--seed", type=int, help="random integer seed polynomial (degree <= 6)")
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--growth", choices=["saturating_seed", "symbolic_bound"],
                   help="also emit a growth ledger in this mode")
    p.add_argument("--C", type=float, default=1.0, help="bound constant for --growth")

    p = sub.add_parser("diagnose", parents=[common], help="growth classification of a norm sequence")
    p.add_argument("--input", required=True, help="CSV (k,norm), expansion JSON or cex JSON")
    p.add_argument("--k0", type=int, help="index of the first norm (CSV carries its own)")

    p = sub.add_parser("oracle", parents=[common], help="finite-difference check of the t-form")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--preset", choices=["poly", "t4", "t6"], default="poly")
    p.add_argument("--t0", type=float, default=0.05)
    p.add_argument("--T", type=float, default=0.5)
    p.add_argument("--m", type=int, default=64)
    p.add_argument("--K", type=int, default=10)
    p.add_argument("--max-condition", type=float, default=1e8,
                   help="refuse coefficient fits above this condition number")
    return parser


def _emit(out: Path, files: dict[str, str], report: dict) -> None:
    for name, text in files.items():
        pio.write_text(out / name, text)
    sys.stdout.write(pio.dumps(report))


def cmd_expand(args):
    cfg = pio.ProblemConfig()
    if args.config:
        cfg = pio.parse_problem_config(Path(args.config).read_text(), cfg)
    for key in ("n", "K", "form", "nonlinearity"):
        if getattr(args, key) is not None:
            setattr(cfg, key, getattr(args, key))
    if args.forcing:
        cfg.forcing = pio.parse_forcing_flag(args.forcing)
    if args.free:
        cfg.free = pio.parse_power_map(args.free, "=")
    if args.C1:
        cfg.C1 = pio.parse_power_map(args.C1)
    if args.Cd:
        cfg.Cd = pio.parse_power_map(args.Cd)
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"--set expects KEY=VALUE, got {item!r}")
        pio.apply_setting(cfg, key, value)
    if not cfg.forcing:
        cfg.forcing = {(2, 0): Fraction(1), (cfg.n + 1, 0): Fraction(1)}
    problem = cfg.problem()
    res = solve_polyhom(problem, cfg.K)
    E = res.expansion
    m = problem.resonant_orders()
    first = [r for r in m if r > 0]
    report = {
        "command": "expand",
        "n": cfg.n, "K": cfg.K, "form": cfg.form, "nonlinearity": cfg.nonlinearity,
        "indicial_roots": [str(r) for r in problem.indicial.roots],
        "series": E.to_json(),
        "N": res.N,
        "log_birth_order": res.log_birth_order,
        "residual_order": res.residual_ord,
        "first_log_coefficient": E.coefficient(first[0], 1) if first else None,
        "order_norms": E.order_norms(),
    }
    return {"expand.json": pio.dumps(report), "expand.csv": pio.series_csv(E)}, report


def cmd_ball(args):
    rep = ball_benchmark(args.n, args.K, default_grid(args.grid_points))
    report = {"command": "ball", **rep.to_json()}
    rows = zip(rep.grid, rep.residuals)
    return {"ball.json": pio.dumps(report),
            "ball.csv": pio.table_csv(["r", "residual"], rows)}, report


def _random_seed_poly(seed: int, degree: int = 6) -> BivariatePoly:
    rng = np.random.default_rng(seed)
    coeffs = {}
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            coeffs[(a, b)] = int(rng.integers(-5, 6))
    return BivariatePoly(coeffs)


def cmd_cex(args):
    if args.seed_poly:
        seed = parse_poly(args.seed_poly)
    elif args.seed is not None:
        seed = _random_seed_poly(args.seed)
    else:
        seed = parse_poly("d:1")
    state = build_cex_series(args.n, seed, args.kmax)
    resid = cex_residual(state)
    ledger = [_log_abs(ak.max_abs_coeff()) for ak in state.a]
    report = {
        "command": "cex",
        **state.to_json(),
        "seed_w": seed.to_table(),
        "divisible": all(ak.is_divisible_by_d(args.n + 1) for ak in state.a),
        "terminated_at": state.terminated_at(),
        "residual": {str(p): c.to_table() for p, c in resid.items()},
        "residual_zero_below_truncation": residual_vanishes_below_truncation(state),
        "residual_zero": not resid,
    }
    files = {"cex.json": pio.dumps(report),
             "cex_ledger.csv": pio.table_csv(["k", "log_max_coeff"], enumerate(ledger))}
    if args.growth:
        g = growth_ledger(args.n, args.C, min(args.kmax, 12), args.growth)
        files["growth_ledger.csv"] = pio.table_csv(["k", "log_max_coeff"], enumerate(g))
        report["growth_ledger"] = {"mode": args.growth, "C": args.C, "log_values": g}
        files["cex.json"] = pio.dumps(report)
    return files, report


def _fit_or_unknown(norms, k0) -> dict:
    try:
        fit = gevrey_fit(norms, k0)
        return fit.to_json()
    except ValueError as exc:
        out = GrowthFit(None, float("nan"), float("nan"), UNKNOWN).to_json()
        out["note"] = str(exc)
        return out


def cmd_diagnose(args):
    path = Path(args.input)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        obj = json.loads(text)
        if "series" in obj:
            series = PolyhomSeries.from_json(obj["series"])
            norms_map = series.order_norms()
            source = "expansion"
        elif "a" in obj:
            state = CexState.from_json(obj)
            norms_map = {k: float(ak.max_abs_coeff()) for k, ak in enumerate(state.a)}
            source = "cex"
        else:
            raise ValueError("JSON input is neither an expansion nor a cex report")
        k0 = min(norms_map) if norms_map else 0
        norms = [norms_map[k] for k in sorted(norms_map)]
    else:
        k0, norms = pio.read_norms_csv(text)
        source = "csv"
    if args.k0 is not None:
        k0 = args.k0
    report = {"command": "diagnose", "source": source, "k0": k0,
              "norms": {str(k0 + i): v for i, v in enumerate(norms)},
              "fit": _fit_or_unknown(norms, k0)}
    return {"diagnose.json": pio.dumps(report)}, report


def cmd_oracle(args):
    n = args.n
    if args.preset == "poly":
        from .cma_model import assemble_model
        # t^2 f = t^2 + t^(2n+2): a plain and a resonant forcing term
        res_order = 2 * n + 2
        problem = assemble_model(n, "t", forcing={2: 1, res_order: 1})
        E = solve_polyhom(problem, args.K).expansion
        exact = np.vectorize(E.evaluate)

        def f(t):
            return 1.0 + np.asarray(t) ** (res_order - 2)
        basis = [(2, 0), (res_order, 0), (res_order, 1)]
        expected = [float(E.coefficient(i, j)) for i, j in basis]
    else:
        power = 4 if args.preset == "t4" else 2 * n + 2
        exact, f = manufactured(n, power)
        basis = [(power, 0)]
        expected = [1.0]
    sol = solve_bvp(n, f, args.t0, args.T, args.m, (float(exact(args.t0)), float(exact(args.T))))
    ref = exact(sol.t)
    err = np.abs(sol.values - ref)
    fit = fit_coefficients(sol, basis, args.max_condition)
    report = {"command": "oracle", "n": n, "preset": args.preset, "t0": args.t0, "T": args.T,
              "m": args.m, "h": sol.h, "max_error": float(err.max()),
              "fit": fit.to_json(), "expected_coeffs": expected}
    rows = zip(sol.t.tolist(), sol.values.tolist(), [float(x) for x in ref], err.tolist())
    return {"oracle.json": pio.dumps(report),
            "oracle.csv": pio.table_csv(["t", "v", "reference", "abs_error"], rows)}, report


COMMANDS = {"expand": cmd_expand, "ball": cmd_ball, "cex": cmd_cex,
            "diagnose": cmd_diagnose, "oracle": cmd_oracle}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"polyhom: {exc}\n")
        return EXIT_INVALID
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        files, report = COMMANDS[args.command](args)
        _emit(Path(args.out), files, report)
    except (ArithmeticError, OracleError, np.linalg.LinAlgError) as exc:
        log.error("numeric failure: %s", exc)
        return EXIT_NUMERIC
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        log.error("invalid input: %s", exc)
        return EXIT_INVALID
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
