"""Finite-difference oracle for  t^2 v'' - (2n-1) t v' - 4(n+1) v = t^2 f  on [t0, T]."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import LinAlgError, solve_banded


class OracleError(ArithmeticError):
    pass


@dataclass
class GridSolution:
    t: np.ndarray
    values: np.ndarray
    n: int
    f: Callable[[np.ndarray], np.ndarray]

    @property
    def h(self) -> float:
        return float(self.t[1] - self.t[0])


@dataclass
class CoefficientFit:
    basis: list[tuple[int, int]]
    coeffs: list[float]
    condition: float
    rms: float

    def to_json(self) -> dict:
        return {"basis": [list(b) for b in self.basis], "coeffs": self.coeffs,
                "condition": self.condition, "rms": self.rms}


def solve_bvp(n: int, f: Callable, t0: float, T: float, m: int,
              bc: tuple[float, float]) -> GridSolution:
    """Second-order centred differences on m uniform intervals, Dirichlet data ``bc``."""
    if m < 16:
        raise ValueError("need m >= 16 intervals")
    if not 1e-3 <= t0 < T:
        raise ValueError("need 1e-3 <= t0 < T")
    t = np.linspace(t0, T, m + 1)
    h = (T - t0) / m
    ti = t[1:-1]
    p = 2 * n - 1
    q = 4 * (n + 1)
    lower = ti**2 / h**2 + p * ti / (2 * h)
    diag = -2 * ti**2 / h**2 - q
    upper = ti**2 / h**2 - p * ti / (2 * h)
    rhs = ti**2 * np.asarray(f(ti), dtype=float) * np.ones_like(ti)
    rhs[0] -= lower[0] * bc[0]
    rhs[-1] -= upper[-1] * bc[1]
    ab = np.zeros((3, m - 1))
    ab[0, 1:] = upper[:-1]
    ab[1, :] = diag
    ab[2, :-1] = lower[1:]
    try:
        inner = solve_banded((1, 1), ab, rhs)
    except (LinAlgError, ValueError) as exc:
        raise OracleError(f"tridiagonal solve failed: {exc}") from exc
    values = np.concatenate([[bc[0]], inner, [bc[1]]])
    return GridSolution(t, values, n, f)


def basis_matrix(t: np.ndarray, basis: Sequence[tuple[int, int]]) -> np.ndarray:
    lt = np.log(t)
    return np.column_stack([t**i * lt**j for i, j in basis])


def fit_coefficients(sol: GridSolution, basis: Sequence[tuple[int, int]],
                     max_condition: float = 1e8) -> CoefficientFit:
    """Least squares of the grid values against t^i (log t)^j, columns scaled to unit norm."""
    if len(basis) > 6:
        raise ValueError("at most 6 basis functions")
    X = basis_matrix(sol.t, basis)
    scale = np.linalg.norm(X, axis=0)
    if np.any(scale == 0):
        raise OracleError("basis function vanishes on the grid")
    Xs = X / scale
    cond = float(np.linalg.cond(Xs))
    if cond > max_condition:
        raise OracleError(f"ill-conditioned basis (condition number {cond:.3g})")
    c, *_ = np.linalg.lstsq(Xs, sol.values, rcond=None)
    coeffs = c / scale
    rms = float(np.sqrt(np.mean((X @ coeffs - sol.values) ** 2)))
    return CoefficientFit(list(map(tuple, basis)), [float(x) for x in coeffs], cond, rms)


def manufactured(n: int, power: int) -> tuple[Callable, Callable]:
    """(v*, f) with v* = t^power and f = P_t(power) t^(power - 2)."""
    Pt = power * power - 2 * n * power - 4 * (n + 1)
    return (lambda t: np.asarray(t, dtype=float) ** power,
            lambda t: Pt * np.asarray(t, dtype=float) ** (power - 2))


def manufactured_error(n: int, power: int, t0: float, T: float, m: int) -> float:
    exact, f = manufactured(n, power)
    sol = solve_bvp(n, f, t0, T, m, (float(exact(t0)), float(exact(T))))
    return float(np.max(np.abs(sol.values - exact(sol.t))))
