"""Monge-Ampere specific pieces: log-det trace series, model presets, and the unit-ball benchmark."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .fuchsian import FuchsianProblem, indicial, solve_polyhom
from .series import PolyhomSeries


class SpectralRadiusError(ArithmeticError):
    pass


@dataclass(frozen=True)
class TracePowerInput:
    """Either the entries of M^{-1}N as series, or precomputed traces tau_k = Tr((M^{-1}N)^k)."""

    matrix_series: Sequence[Sequence[PolyhomSeries]] | None = None
    trace_powers: Sequence[PolyhomSeries] | None = None

    def __post_init__(self):
        if (self.matrix_series is None) == (self.trace_powers is None):
            raise ValueError("give exactly one of matrix_series or trace_powers")


def _matmul(A, B):
    size = len(A)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            acc = A[i][0] * B[0][j]
            for k in range(1, size):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def trace_powers(matrix: Sequence[Sequence[PolyhomSeries]], K: int) -> list[PolyhomSeries]:
    """tau_k for k = 1.. until the matrix power vanishes through order K."""
    for row in matrix:
        for entry in row:
            if (0, 0) in entry.terms:
                raise ValueError("matrix entries need zero constant term for formal convergence")
    M = [[e.retrunc(min(e.trunc, K)) for e in row] for row in matrix]
    taus = []
    power = M
    for _ in range(K):
        tau = power[0][0]
        for i in range(1, len(power)):
            tau = tau + power[i][i]
        taus.append(tau)
        if not any(e for row in power for e in row):
            break
        power = _matmul(power, M)
    return taus


def logdet_series(x: TracePowerInput, K: int) -> PolyhomSeries:
    """log det(I + X) = sum_k (-1)^(k-1) tau_k / k, truncated at K."""
    taus = list(x.trace_powers) if x.trace_powers is not None else trace_powers(x.matrix_series, K)
    if not taus:
        raise ValueError("no trace powers")
    first = taus[0]
    total = PolyhomSeries.zero(min(K, first.trunc), first.var, first.ring)
    for k, tau in enumerate(taus, start=1):
        total = total + tau * Fraction((-1) ** (k - 1), k)
    return total


def logdet_truncated(X, K: int = 12, max_spectral_radius: float = 0.5) -> float:
    """Numeric mode: the same truncated trace series for a constant matrix."""
    X = np.asarray(X, dtype=float)
    rho = max(abs(np.linalg.eigvals(X)))
    if rho >= max_spectral_radius:
        raise SpectralRadiusError(f"spectral radius {rho:.3g} >= {max_spectral_radius}")
    total = 0.0
    P = np.eye(X.shape[0])
    for k in range(1, K + 1):
        P = P @ X
        total += (-1) ** (k - 1) * np.trace(P) / k
    return float(total)


@dataclass
class ModelNonlinearity:
    """F2 = Tr X - log det(I + X) for the radial frame matrix X = diag(lam_r, lam_t, ..., lam_t).

    lam_r = x^2 (1 + x C1) v'' + x^2 Cd v'  (normal direction)
    lam_t = -x v'                            (n - 1 tangential directions)

    so that Tr X equals the linear part x^2(1 + x C1) v'' + (-(n-1) x + x^2 Cd) v'.
    """

    n: int
    C1: PolyhomSeries | None = None
    Cd: PolyhomSeries | None = None

    def eigenvalues(self, v: PolyhomSeries) -> tuple[PolyhomSeries, PolyhomSeries]:
        ev = v.euler()
        x2v2 = ev.euler() - ev
        lam_r = x2v2
        if self.C1 is not None:
            lam_r = lam_r + self.C1.retrunc(v.trunc) * x2v2.shift(1)
        if self.Cd is not None:
            lam_r = lam_r + self.Cd.retrunc(v.trunc) * ev.shift(1)
        return lam_r, -ev

    def matrix(self, v: PolyhomSeries) -> list[list[PolyhomSeries]]:
        lam_r, lam_t = self.eigenvalues(v)
        zero = PolyhomSeries.zero(v.trunc, v.var, v.ring)
        diag = [lam_r] + [lam_t] * (self.n - 1)
        return [[diag[i] if i == j else zero for j in range(self.n)] for i in range(self.n)]

    def __call__(self, v: PolyhomSeries) -> PolyhomSeries:
        lam_r, lam_t = self.eigenvalues(v)
        K = v.trunc
        taus = []
        pr, pt = lam_r, lam_t
        for _ in range(K):
            taus.append(pr + pt * (self.n - 1))
            if not pr and not pt:
                break
            pr, pt = pr * lam_r, pt * lam_t
        return taus[0] - logdet_series(TracePowerInput(trace_powers=taus), K)


def _poly_series(coeffs, var, ring="exact", trunc=64):
    if coeffs is None:
        return None
    if isinstance(coeffs, PolyhomSeries):
        return coeffs
    if isinstance(coeffs, dict):
        return PolyhomSeries({(i, 0): c for i, c in coeffs.items()}, trunc, var, ring)
    return PolyhomSeries.from_powers(list(coeffs), trunc, var, ring)


FORMS = {
    # form: (a1, a0) as functions of n
    "d": (lambda n: -(n - 1), lambda n: -(n + 1)),
    "t": (lambda n: -(2 * n - 1), lambda n: -4 * (n + 1)),
    # equation for v1 = v' - 2 v / t obtained by differentiating the t-form
    "v1": (lambda n: -(2 * n - 3), lambda n: -(6 * n + 3)),
}


def assemble_model(n: int, form: str = "d", *, C1=None, Cd=None, forcing=None,
                   nonlinearity: str = "none", free=None, ring: str = "exact"
                   ) -> FuchsianProblem:
    """Model problem presets.

    ``form="d"`` is d^2 v'' - (n-1) d v' - (n+1) v with optional C1, Cd slots and,
    with ``nonlinearity="model"``, the radial log-det nonlinearity.  ``"t"`` is the
    same linear operator after d = t^2/2 (times 4); ``"v1"`` is the operator
    satisfied by v1 = v' - 2v/t.  Coefficient data may be series, lists or
    {power: value} dicts, all read as exact finite sums.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}")
    var = "d" if form == "d" else "t"
    a1, a0 = (f(n) for f in FORMS[form])
    C1s = _poly_series(C1, var, ring)
    Cds = _poly_series(Cd, var, ring)
    if forcing is None:
        fs = PolyhomSeries.zero(64, var, ring)
    elif isinstance(forcing, PolyhomSeries):
        fs = forcing
    else:
        fs = PolyhomSeries({k if isinstance(k, tuple) else (k, 0): c
                            for k, c in dict(forcing).items()}, 64, var, ring)
    if nonlinearity == "model":
        if form != "d":
            raise ValueError("the model nonlinearity is defined for the d-form only")
        nl = ModelNonlinearity(n, C1s, Cds)
    elif nonlinearity == "none":
        nl = None
    else:
        raise ValueError(f"unknown nonlinearity {nonlinearity!r}")
    return FuchsianProblem(n, indicial(a1, a0), fs, C1s, Cds, nl, dict(free or {}))


def ball_problem(n: int) -> FuchsianProblem:
    """Radial reduction on the unit ball with d = 1 - |z|^2: C1 = Cd = -1, zero forcing."""
    return assemble_model(n, "d", C1=[-1], Cd=[-1], forcing=None, nonlinearity="model")


def ball_forcing(n: int, z: np.ndarray) -> float:
    """-log(det(rho_{i jbar}) (-rho + rho^{i jbar} rho_i rho_jbar)) for rho = |z|^2 - 1."""
    z = np.asarray(z, dtype=complex)
    rho = float(np.vdot(z, z).real) - 1.0
    hess = np.eye(n, dtype=complex)
    grad = np.conj(z)  # rho_i = d/dz_i (z . conj z)
    inv = np.linalg.inv(hess)
    q = float(np.real(grad @ inv @ np.conj(grad)))
    return -math.log(float(np.linalg.det(hess).real) * (-rho + q))


def _ke_point_residual(n: int, r: float) -> float:
    """Relative residual |det(w_{i jbar}) / e^{(n+1)w} - 1| for w = -log(1 - |z|^2) at |z| = r."""
    direction = np.arange(1, n + 1, dtype=float) + 1j * np.arange(n, 0, -1, dtype=float)
    z = r * direction / np.linalg.norm(direction)
    x = r * r
    a = 1.0 / (1.0 - x)           # w'(x) with x = |z|^2
    b = 1.0 / (1.0 - x) ** 2      # w''(x)
    hess = a * np.eye(n) + b * np.outer(np.conj(z), z)
    det_dense = np.linalg.det(hess).real
    det_closed = a ** (n - 1) * (a + b * x)
    target = (1.0 - x) ** (-(n + 1))
    return max(abs(det_dense / target - 1.0), abs(det_closed / target - 1.0))


@dataclass
class BallBenchmarkReport:
    n: int
    K: int
    grid: list[float]
    residuals: list[float]
    max_pointwise_residual: float
    expansion_coeff_max: Fraction
    c_n1_log: Fraction
    forcing_max: float = 0.0
    expansion: PolyhomSeries | None = field(default=None, repr=False)

    @property
    def expansion_zero(self) -> bool:
        return self.expansion_coeff_max == 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "K": self.K,
            "grid": self.grid,
            "residuals": self.residuals,
            "max_pointwise_residual": self.max_pointwise_residual,
            "forcing_max": self.forcing_max,
            "expansion_zero": self.expansion_zero,
            "expansion_coeff_max": str(self.expansion_coeff_max),
            "c_n1_log": str(self.c_n1_log),
        }


def default_grid(points: int = 20) -> list[float]:
    return [float(r) for r in np.linspace(0.05, 0.95, points)]


def ball_benchmark(n: int, K: int, radius_grid: Sequence[float] | None = None
                   ) -> BallBenchmarkReport:
    grid = default_grid() if radius_grid is None else [float(r) for r in radius_grid]
    if any(not 0.0 < r < 1.0 for r in grid):
        raise ValueError("radius grid must lie strictly inside (0, 1)")
    residuals = [_ke_point_residual(n, r) for r in grid]
    forcing = [abs(ball_forcing(n, np.full(n, r / math.sqrt(n)))) for r in grid]
    result = solve_polyhom(ball_problem(n), K)
    E = result.expansion
    cmax = max((abs(c) for c in E.terms.values()), default=Fraction(0))
    return BallBenchmarkReport(
        n=n, K=K, grid=grid, residuals=residuals,
        max_pointwise_residual=max(residuals),
        expansion_coeff_max=cmax,
        c_n1_log=E.coefficient(n + 1, 1),
        forcing_max=max(forcing),
        expansion=E,
    )


def first_log_coefficient(p: FuchsianProblem, K: int):
    """c_{m,1} at the first positive resonant order m (m = n+1 for the d-form)."""
    positive = [m for m in p.resonant_orders() if m > 0]
    if not positive:
        raise ValueError("operator has no positive integer indicial root")
    m = positive[0]
    if K < m:
        raise ValueError(f"K must be at least the resonant order {m}")
    return solve_polyhom(p, K).coefficient(m, 1)

