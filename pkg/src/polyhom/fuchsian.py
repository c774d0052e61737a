"""Resonance-aware order-by-order solver for Fuchsian model operators.

The operator acting on a log-power series v(x) is

    x^2 (1 + x C1) v'' + (a1 x + x^2 Cd) v' + a0 v - N(v) - f,

with analytic perturbation coefficients C1, Cd, a nonlinearity N that only
feeds back at higher order, and a polyhomogeneous right-hand side f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Mapping

from .series import PolyhomSeries, coerce, residual_order

Nonlinearity = Callable[[PolyhomSeries], PolyhomSeries]


class UnsupportedResonanceError(ValueError):
    """Raised at a double indicial root, where the log ladder needs two extra rungs."""


@dataclass(frozen=True)
class IndicialData:
    a1: Fraction
    a0: Fraction
    roots: tuple
    kind: str  # "rational", "double", "irrational" or "complex"

    def P(self, s):
        return s * (s - 1) + self.a1 * s + self.a0

    def Pprime(self, s):
        return 2 * s - 1 + self.a1

    def Pprime_at(self, m: int) -> Fraction:
        return self.Pprime(Fraction(m))

    def integer_roots(self) -> list[int]:
        if self.kind not in ("rational", "double"):
            return []
        return sorted({int(r) for r in self.roots if r.denominator == 1})

    def is_resonant(self, m: int) -> bool:
        return self.P(Fraction(m)) == 0


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    p, r = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if p * p == q.numerator and r * r == q.denominator:
        return Fraction(p, r)
    return None


def indicial(a1, a0) -> IndicialData:
    """Roots of P(s) = s(s-1) + a1 s + a0, classified exactly."""
    a1, a0 = Fraction(a1), Fraction(a0)
    b = a1 - 1
    disc = b * b - 4 * a0
    if disc == 0:
        return IndicialData(a1, a0, (-b / 2,), "double")
    root = _rational_sqrt(disc)
    if root is not None:
        return IndicialData(a1, a0, tuple(sorted(((-b + root) / 2, (-b - root) / 2),
                                                 reverse=True)), "rational")
    if disc > 0:
        s = math.sqrt(disc)
        return IndicialData(a1, a0, ((-float(b) + s) / 2, (-float(b) - s) / 2), "irrational")
    return IndicialData(a1, a0, (), "complex")


@dataclass(frozen=True)
class FuchsianProblem:
    n: int
    indicial: IndicialData
    forcing: PolyhomSeries
    C1: PolyhomSeries | None = None
    Cd: PolyhomSeries | None = None
    nonlinearity: Nonlinearity | None = None
    free: Mapping[int, object] = field(default_factory=dict)

    @property
    def var(self) -> str:
        return self.forcing.var

    @property
    def ring(self) -> str:
        return self.forcing.ring

    def resonant_orders(self) -> list[int]:
        return [m for m in self.indicial.integer_roots() if m >= 0]


def linear_problem(a1, a0, forcing: PolyhomSeries, *, n: int = 2, C1=None, Cd=None,
                   free=None) -> FuchsianProblem:
    return FuchsianProblem(n, indicial(a1, a0), forcing, C1, Cd, None, dict(free or {}))


@dataclass
class ExpansionResult:
    expansion: PolyhomSeries
    log_birth_order: int | None
    N: dict[int, int]
    residual_ord: int

    def coefficient(self, i: int, j: int = 0):
        return self.expansion.coefficient(i, j)


def second_derivative_term(v: PolyhomSeries) -> PolyhomSeries:
    """x^2 v'' computed as E(E v) - E v with the Euler operator E = x d/dx."""
    ev = v.euler()
    return ev.euler() - ev


def apply_operator(p: FuchsianProblem, v: PolyhomSeries) -> PolyhomSeries:
    ind = p.indicial
    x2v2 = second_derivative_term(v)
    xv1 = v.euler()
    out = x2v2 + xv1 * ind.a1 + v * ind.a0
    if p.C1 is not None and p.C1:
        out = out + p.C1 * x2v2.shift(1)
    if p.Cd is not None and p.Cd:
        out = out + p.Cd * xv1.shift(1)
    if p.nonlinearity is not None:
        out = out - p.nonlinearity(v)
    return out - p.forcing


def _solve_order(ind: IndicialData, m: int, resid: Mapping[int, object], ring: str) -> dict:
    """Coefficients c_j of sum_j c_j x^m log^j x cancelling the order-m residual block."""
    top = max(resid)
    zero = coerce(0, ring)
    r = {j: resid.get(j, zero) for j in range(top + 1)}
    Pm, dPm = ind.P(Fraction(m)), ind.Pprime_at(m)
    c: dict[int, object] = {}
    if Pm != 0:
        # L[x^m log^j] = P x^m log^j + j P' x^m log^{j-1} + j(j-1) x^m log^{j-2}
        for j in range(top, -1, -1):
            acc = -r[j]
            if j + 1 in c:
                acc = acc - c[j + 1] * coerce((j + 1) * dPm, ring)
            if j + 2 in c:
                acc = acc - c[j + 2] * coerce((j + 2) * (j + 1), ring)
            c[j] = acc * coerce(1 / Pm, ring)
        return c
    if dPm == 0:
        raise UnsupportedResonanceError(f"double indicial root at order {m}")
    # resonant: the log-degree rises by one; the x^m log^0 slot is left to the free data
    for j in range(top, -1, -1):
        acc = -r[j]
        if j + 2 in c:
            acc = acc - c[j + 2] * coerce((j + 2) * (j + 1), ring)
        c[j + 1] = acc * coerce(1 / ((j + 1) * dPm), ring)
    return c


def solve_polyhom(p: FuchsianProblem, K: int, free: Mapping[int, object] | None = None
                  ) -> ExpansionResult:
    """Order-by-order polyhomogeneous solution with residual vanishing through x^K."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    free = {**dict(p.free), **dict(free or {})}
    for m in free:
        if not p.indicial.is_resonant(m):
            raise ValueError(f"free coefficient given at non-resonant order {m}")
    p = at_order(p, K)
    ring, var = p.ring, p.var
    E = PolyhomSeries.zero(K, var, ring)
    for m in range(K + 1):
        R = apply_operator(p, E.retrunc(K))
        low = residual_order(R)
        if low < m:
            raise ArithmeticError(f"residual reappeared at order {low} while solving order {m}")
        block = R.order_terms(m)
        new: dict[tuple[int, int], object] = {}
        if block:
            for j, c in _solve_order(p.indicial, m, block, ring).items():
                new[(m, j)] = c
        if p.indicial.is_resonant(m) and m in free:
            new[(m, 0)] = coerce(free[m], ring)
        if new:
            E = E + PolyhomSeries(new, K, var, ring)
    resid = residual_order(apply_operator(p, E))
    return ExpansionResult(E, E.log_birth_order(), E.log_degrees(), resid)


def at_order(p: FuchsianProblem, K: int) -> FuchsianProblem:
    """Re-declare forcing and perturbation data (exact finite sums) at truncation K."""
    def rt(s):
        return None if s is None else s.retrunc(K)
    return replace(p, forcing=p.forcing.retrunc(K), C1=rt(p.C1), Cd=rt(p.Cd))


def verify_expansion(p: FuchsianProblem, E: PolyhomSeries, K: int) -> int:
    return residual_order(apply_operator(at_order(p, K), E.retrunc(K)))
