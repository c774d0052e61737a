"""Grid-refinement study of the finite-difference oracle against exact and expansion references."""

import argparse
from pathlib import Path

import numpy as np

from polyhom.cma_model import assemble_model
from polyhom.fuchsian import solve_polyhom
from polyhom.io import table_csv, write_text
from polyhom.numeric_oracle import manufactured, solve_bvp


def references(n, K):
    yield "t4", *manufactured(n, 4)
    yield f"t{2 * n + 2}", *manufactured(n, 2 * n + 2)
    E = solve_polyhom(assemble_model(n, "t", forcing={2: 1, 2 * n + 2: 1}), K).expansion
    yield "poly", np.vectorize(E.evaluate), lambda t: 1.0 + np.asarray(t) ** (2 * n)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--K", type=int, default=10)
    ap.add_argument("--t0", type=float, default=0.05)
    ap.add_argument("--T", type=float, default=0.5)
    ap.add_argument("--grids", type=int, nargs="+", default=[16, 32, 64, 128, 256, 512])
    ap.add_argument("--out", default="results/oracle_convergence.csv")
    args = ap.parse_args()
    rows = []
    for name, exact, f in references(args.n, args.K):
        prev = None
        for m in args.grids:
            sol = solve_bvp(args.n, f, args.t0, args.T, m, (float(exact(args.t0)), float(exact(args.T))))
            err = float(np.max(np.abs(sol.values - exact(sol.t))))
            ratio = prev / err if prev else float("nan")
            rows.append([name, m, sol.h, err, ratio, err / sol.h**2])
            print(f"{name:5s} m={m:4d} err={err:.3e} ratio={ratio:.3f} err/h^2={err / sol.h**2:.4f}")
            prev = err
    write_text(Path(args.out), table_csv(["case", "m", "h", "max_error", "ratio", "err_over_h2"], rows))


if __name__ == "__main__":
    main()
