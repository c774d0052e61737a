"""Acceptance criteria, one check per criterion at its stated tolerance.

Run directly (``python tests/test_acceptance.py``) for a pass/fail table, or
through pytest, where each criterion is its own test and the table is printed
in the terminal summary.
"""

from __future__ import annotations

import contextlib
import io
import math
import random
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from polyhom.bivariate import BivariatePoly, parse_poly
from polyhom.cli import run
from polyhom.cma_model import assemble_model, ball_benchmark, logdet_truncated
from polyhom.counterexample import build_cex_series, cex_residual, s_series
from polyhom.diagnostics import gevrey_fit
from polyhom.fuchsian import apply_operator, solve_polyhom, verify_expansion
from polyhom.numeric_oracle import manufactured_error, solve_bvp
from polyhom.series import PolyhomSeries

F = Fraction
RESULTS: dict[int, tuple[bool, str]] = {}


def _rand_fraction(rng: random.Random) -> Fraction:
    return F(rng.randint(-9, 9), rng.randint(1, 7))


def criterion_1():
    """Indicial roots of the d- and t-forms, checked by monomial substitution."""
    start = time.perf_counter()
    bad = []
    for n in (2, 3, 4, 5):
        for form, roots in (("d", {F(n + 1), F(-1)}), ("t", {F(2 * n + 2), F(-2)})):
            p = assemble_model(n, form)
            if set(p.indicial.roots) != roots:
                bad.append((n, form, p.indicial.roots))
            for s in roots:
                # direct substitution: s(s-1) + a1 s + a0
                if s * (s - 1) + p.indicial.a1 * s + p.indicial.a0 != 0:
                    bad.append((n, form, s))
                if s >= 0 and apply_operator(p, PolyhomSeries.monomial(int(s), trunc=int(s) + 1,
                                                                       var=p.var)):
                    bad.append((n, form, "operator", s))
    elapsed = time.perf_counter() - start
    return not bad and elapsed < 1.0, f"n=2..5 exact roots, {elapsed:.3f}s, mismatches={bad}"


def criterion_2():
    """First log at n+1 with N_{n+1} = 1; sharp residual; perturbation detection."""
    rng = random.Random(20260)
    problems = []
    for n in (2, 3, 4, 5):
        K = n + 6
        for nl in ("none", "model"):
            forcing = {i: _rand_fraction(rng) for i in range(0, K + 1)}
            forcing[n + 1] = forcing[n + 1] or F(1)
            p = assemble_model(n, "d", forcing=forcing, nonlinearity=nl,
                               C1={0: _rand_fraction(rng)}, Cd={1: _rand_fraction(rng)})
            res = solve_polyhom(p, K)
            E = res.expansion
            if res.N.get(n + 1) != 1 or res.log_birth_order != n + 1:
                problems.append((n, nl, "log birth", res.N))
            if any(j for i, j in E.terms if i < n + 1):
                problems.append((n, nl, "early log"))
            if verify_expansion(p, E, K) < K + 1:
                problems.append((n, nl, "residual"))
            for key in E.terms:
                bumped = E + PolyhomSeries({key: 1}, K)
                if verify_expansion(p, bumped, K) >= K + 1:
                    problems.append((n, nl, "undetected", key))
    c31 = solve_polyhom(assemble_model(2, "d", forcing={3: 1}), 8).coefficient(3, 1)
    ok = not problems and c31 == F(1, 4)
    return ok, f"8 random problems n=2..5, K=n+6; c_3,1={c31}; problems={problems}"


def criterion_3():
    """Unit-ball benchmark for n = 2, 3."""
    lines, ok = [], True
    for n in (2, 3):
        start = time.perf_counter()
        rep = ball_benchmark(n, 10)
        elapsed = time.perf_counter() - start
        good = (len(rep.grid) == 20 and rep.max_pointwise_residual <= 1e-12
                and rep.expansion_zero and rep.c_n1_log == 0 and elapsed < 1.0)
        ok &= good
        lines.append(f"n={n}: max residual {rep.max_pointwise_residual:.1e}, "
                     f"zero={rep.expansion_zero}, c_n1_log={rep.c_n1_log}, {elapsed:.3f}s")
    return ok, "; ".join(lines)


def criterion_4():
    """Truncated log-det trace series against the dense determinant."""
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(100):
        X = rng.standard_normal((3, 3))
        X *= rng.uniform(0.0, 0.3) / np.linalg.norm(X, 2)
        err = abs(logdet_truncated(X, 12) - np.linalg.slogdet(np.eye(3) + X)[1])
        worst = max(worst, err)
    return worst <= 1e-10, f"100 matrices, ||X||_2 <= 0.3, K=12: max error {worst:.2e} (tol 1e-10)"


def _random_seed(rng: random.Random) -> BivariatePoly:
    degree = rng.randint(0, 6)
    coeffs = {}
    for _ in range(rng.randint(1, 10)):
        a = rng.randint(0, degree)
        b = rng.randint(0, degree - a)
        coeffs[(a, b)] = _rand_fraction(rng)
    return BivariatePoly(coeffs)


def criterion_5():
    """Counterexample series: divisibility and telescoping residual, exact."""
    start = time.perf_counter()
    rng = random.Random(5)
    failures = 0
    count = 0
    for n in (2, 3):
        for _ in range(25):
            s = build_cex_series(n, _random_seed(rng), 8)
            count += 1
            divisible = all(ak.is_divisible_by_d(n + 1) for ak in s.a)
            telescopes = all(p >= 16 for p in cex_residual(s))
            failures += not (divisible and telescopes)
    worked = s_series(build_cex_series(2, parse_poly("d:1"), 8))
    worked_ok = worked == {0: parse_poly("d^4:1"), 2: parse_poly("d^3:-5/2")}
    elapsed = time.perf_counter() - start
    ok = failures == 0 and worked_ok and elapsed < 10.0
    return ok, (f"{count} random seeds, failures={failures}; "
                f"v = d^4 - (5/2) d^3 s^2: {worked_ok}; {elapsed:.2f}s")


def criterion_6():
    """Gevrey order 2 on (k!)^2 and (2k)!, convergence with radius 2 on 2^-k."""
    ks = range(1, 21)
    sq = gevrey_fit([float(math.factorial(k)) ** 2 for k in ks])
    dbl = gevrey_fit([float(math.factorial(2 * k)) for k in ks])
    geo = gevrey_fit([2.0**-k for k in ks])
    ok = (abs(sq.gevrey_order - 2) <= 0.1 and abs(dbl.gevrey_order - 2) <= 0.1
          and geo.gevrey_order <= 0.15 and geo.radius_estimate is not None
          and abs(geo.radius_estimate - 2.0) <= 0.05)
    return ok, (f"sigma (k!)^2={sq.gevrey_order:.3f}, (2k)!={dbl.gevrey_order:.3f}, "
                f"2^-k={geo.gevrey_order:.1e} with R={geo.radius_estimate:.4f}")


ORACLE_C = 0.05


def criterion_7():
    """Second-order grid convergence and expansion/oracle agreement."""
    ratios = []
    for power in (4, 6):
        errs = [manufactured_error(2, power, 0.1, 1.0, m) for m in (32, 64, 128)]
        ratios += [a / b for a, b in zip(errs, errs[1:])]
    n, K, t0, T = 2, 10, 0.05, 0.5
    E = solve_polyhom(assemble_model(n, "t", forcing={2: 1, 2 * n + 2: 1}), K).expansion
    exact = np.vectorize(E.evaluate)
    scaled = []
    for m in (32, 64, 128):
        sol = solve_bvp(n, lambda t: 1.0 + np.asarray(t) ** (2 * n), t0, T, m,
                        (exact(t0), exact(T)))
        err = float(np.max(np.abs(sol.values - exact(sol.t))))
        scaled.append(err / (sol.h**2 + T ** (K + 1)))
    ok = all(3.5 <= r <= 4.5 for r in ratios) and max(scaled) <= ORACLE_C
    return ok, (f"doubling ratios {[round(r, 3) for r in ratios]}; "
                f"err/(h^2+T^(K+1)) max {max(scaled):.4f} <= C={ORACLE_C}")


PRESETS = [["expand"], ["ball"], ["cex"], ["oracle"]]


def criterion_8():
    """Every CLI preset is byte-identical across repeated runs."""
    mismatched = []
    with tempfile.TemporaryDirectory() as tmp, contextlib.redirect_stdout(io.StringIO()):
        for argv in PRESETS:
            outs = []
            for rep in ("a", "b"):
                out = Path(tmp) / argv[0] / rep
                if run(argv + ["--out", str(out)]) != 0:
                    mismatched.append((argv[0], "exit"))
                outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
            if outs[0] != outs[1]:
                mismatched.append(argv[0])
        exp = str(Path(tmp) / "expand" / "a" / "expand.json")
        outs = []
        for rep in ("a", "b"):
            out = Path(tmp) / "diagnose" / rep
            run(["diagnose", "--input", exp, "--out", str(out)])
            outs.append((out / "diagnose.json").read_bytes())
        if outs[0] != outs[1]:
            mismatched.append("diagnose")
    return not mismatched, f"presets expand, ball, cex, oracle, diagnose; mismatched={mismatched}"


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
            5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8}


def check(number: int) -> tuple[bool, str]:
    ok, detail = CRITERIA[number]()
    RESULTS[number] = (ok, detail)
    print(format_line(number, ok, detail))
    return ok, detail


def format_line(number: int, ok: bool, detail: str) -> str:
    doc = CRITERIA[number].__doc__.strip().splitlines()[0]
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {doc} :: {detail}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, detail = check(number)
    assert ok, detail


if __name__ == "__main__":
    results = [CRITERIA[k]() for k in sorted(CRITERIA)]
    for k, (ok, detail) in zip(sorted(CRITERIA), results):
        print(format_line(k, ok, detail))
    sys.exit(0 if all(ok for ok, _ in results) else 1)
