"""The divergent s-series  v = sum_k (-A/d)^k (d^{n+1} w) s^{2k} / (2k)!  for

    d^2 v_dd + d^2 v_tt + d v_ss - (n-1) d v_d - (n+1) v = 0,

with A = d^2 (d_dd + d_tt) - (n-1) d d_d - (n+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bivariate import BivariatePoly

KMAX_LEDGER = 12


@dataclass(frozen=True)
class CexState:
    n: int
    seed_w: BivariatePoly
    a: tuple[BivariatePoly, ...]
    kmax: int

    def terminated_at(self) -> int | None:
        """First k with a_k = 0, if the series terminates within kmax."""
        return next((k for k, ak in enumerate(self.a) if not ak), None)

    def to_json(self) -> dict:
        return {"n": self.n, "kmax": self.kmax, "a": [ak.to_table() for ak in self.a]}

    @classmethod
    def from_json(cls, obj: dict, seed_w: BivariatePoly | None = None) -> CexState:
        a = tuple(BivariatePoly.from_table(rows) for rows in obj["a"])
        n = int(obj["n"])
        if seed_w is None:
            seed_w = a[0].div_d(n + 1)
        return cls(n, seed_w, a, int(obj["kmax"]))


def apply_A(n: int, h: BivariatePoly) -> BivariatePoly:
    return (h.diff("d", 2).mul_d(2) + h.diff("t", 2).mul_d(2)
            - h.diff("d").mul_d(1) * (n - 1) - h * (n + 1))


def step(n: int, a_k: BivariatePoly) -> BivariatePoly:
    """(-A/d) a_k, with the division by d checked exactly."""
    try:
        return -apply_A(n, a_k).div_d(1)
    except ArithmeticError as exc:
        raise ArithmeticError(f"A(a_k) not divisible by d: {exc}") from exc


def build_cex_series(n: int, seed_w: BivariatePoly, kmax: int) -> CexState:
    if any(isinstance(c, float) for c in seed_w.coeffs.values()):
        raise ValueError("seed must have exact rational coefficients")
    a = [seed_w.mul_d(n + 1)]
    for k in range(kmax):
        nxt = step(n, a[-1])
        if not nxt.is_divisible_by_d(n + 1):
            raise ArithmeticError(f"a_{k + 1} lost its d^{n + 1} factor")
        a.append(nxt)
    return CexState(n, seed_w, tuple(a), kmax)


def s_series(state: CexState) -> dict[int, BivariatePoly]:
    """Coefficient of s^p in the truncated sum of a_k s^{2k}/(2k)!."""
    return {2 * k: ak / math.factorial(2 * k) for k, ak in enumerate(state.a) if ak}


def cex_residual(state: CexState) -> dict[int, BivariatePoly]:
    """Apply A + d d_ss to the truncated s-series; returns s-power -> coefficient (nonzero only)."""
    v = s_series(state)
    out: dict[int, BivariatePoly] = {}
    for p, c in v.items():
        out[p] = out.get(p, BivariatePoly()) + apply_A(state.n, c)
        if p >= 2:
            out[p - 2] = out.get(p - 2, BivariatePoly()) + c.mul_d(1) * (p * (p - 1))
    return {p: c for p, c in sorted(out.items()) if c}


def residual_vanishes_below_truncation(state: CexState) -> bool:
    return all(p >= 2 * state.kmax for p in cex_residual(state))


def first_order_formula(n: int, h: BivariatePoly) -> BivariatePoly:
    """Closed form of (-A/d)(d^{n+1} h) = -d^{n+1} (d h_dd + d h_tt + (n+3) h_d)."""
    inner = h.diff("d", 2).mul_d(1) + h.diff("t", 2).mul_d(1) + h.diff("d") * (n + 3)
    return -inner.mul_d(n + 1)


def saturating_seed(bound_C, degree: int) -> BivariatePoly:
    """Seed whose Taylor coefficients meet C^{|a|+1} (2a)!/a! in each variable."""
    C = Fraction(bound_C)
    coeffs = {}
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            coeffs[(i, j)] = (C ** (i + j + 1)
                              * Fraction(math.factorial(2 * i), math.factorial(i))
                              * Fraction(math.factorial(2 * j), math.factorial(j)))
    return BivariatePoly(coeffs)


def _log_abs(x) -> float:
    if not x:
        return -math.inf
    if isinstance(x, Fraction):
        return math.log(abs(x.numerator)) - math.log(x.denominator)
    return math.log(abs(x))


def symbolic_bound(n: int, bound_C: float, kmax: int, r: float = 1.0) -> list[float]:
    """log of a sup-norm majorant for a_k on {0 < d < r}.

    With a_k = d^{n+1} h_k and h_{k+1} = -(d Lap h_k + (n+3) d_d h_k), the bounds
    E_k(p, j) >= sup |d_d^p Lap^j h_k| obey

        E_{k+1}(p, j) <= r E_k(p, j+1) + p E_k(p-1, j+1) + (2j + n + 3) E_k(p+1, j),

    using Lap(d g) = d Lap g + 2 d_d g.  The seed bound C^{p+j+1} (2j)! (2p)! starts it.
    """
    size = kmax + 1
    E = [[bound_C ** (p + j + 1) * math.factorial(2 * j) * math.factorial(2 * p)
          for j in range(size + 1)] for p in range(size + 1)]
    out = [_log_abs(r ** (n + 1) * E[0][0])]
    for k in range(kmax):
        lim = size - k - 1
        nxt = [[0.0] * (size + 1) for _ in range(size + 1)]
        for p in range(lim + 1):
            for j in range(lim + 1 - p):
                val = r * E[p][j + 1] + (2 * j + n + 3) * E[p + 1][j]
                if p:
                    val += p * E[p - 1][j + 1]
                nxt[p][j] = val
        E = nxt
        out.append(_log_abs(r ** (n + 1) * E[0][0]))
    return out


def growth_ledger(n: int, bound_C: float, kmax: int, mode: str = "saturating_seed",
                  seed_degree: int | None = None, statistic: str = "boundary") -> list[float]:
    """Per-k growth of the counterexample coefficients, in log space.

    ``saturating_seed`` builds the series from :func:`saturating_seed` and reports
    log |[d^{n+1} t^0] a_k| (``statistic="boundary"``; independent of the seed
    truncation once seed_degree >= k) or log max_coeff |a_k| (``"max"``).
    ``symbolic_bound`` returns the log majorant of :func:`symbolic_bound`.
    Zero entries come back as -inf.
    """
    if kmax > KMAX_LEDGER:
        raise ValueError(f"kmax must be <= {KMAX_LEDGER}")
    if bound_C < 0:
        raise ValueError("bound_C must be nonnegative")
    if mode == "symbolic_bound":
        return symbolic_bound(n, float(bound_C), kmax)
    if mode != "saturating_seed":
        raise ValueError(f"unknown mode {mode!r}")
    degree = kmax + 2 if seed_degree is None else seed_degree
    state = build_cex_series(n, saturating_seed(bound_C, degree), kmax)
    if statistic == "boundary":
        return [_log_abs(ak.coeffs.get((n + 1, 0), 0)) for ak in state.a]
    if statistic == "max":
        return [_log_abs(ak.max_abs_coeff()) for ak in state.a]
    raise ValueError(f"unknown statistic {statistic!r}")
