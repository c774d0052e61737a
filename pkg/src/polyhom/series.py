"""Truncated log-power series  sum c[i, j] * x**i * (log x)**j  over a selectable coefficient ring.

Three rings are supported: ``"exact"`` (``fractions.Fraction``), ``"float"`` and
``"poly"`` (:class:`~polyhom.bivariate.BivariatePoly` coefficients).  A series
carries its truncation order ``trunc``: coefficients with ``i > trunc`` are not
represented and carry no information.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .bivariate import BivariatePoly

RINGS = ("exact", "float", "poly")
VARIABLES = ("d", "t")


class SeriesError(ValueError):
    pass


class RingMismatchError(SeriesError):
    pass


class VariableMismatchError(SeriesError):
    pass


class RingCapabilityError(SeriesError):
    pass


class NotDifferentiableError(SeriesError):
    pass


def coerce(c, ring: str):
    """Convert ``c`` into an element of ``ring`` or raise :class:`RingMismatchError`."""
    if isinstance(c, bool):
        raise RingMismatchError("bool is not a coefficient")
    if ring == "exact":
        if isinstance(c, Fraction):
            return c
        if isinstance(c, (int, str)):
            return Fraction(c)
        raise RingMismatchError(f"{type(c).__name__} coefficient in exact ring")
    if ring == "float":
        if isinstance(c, (float, int, Fraction)):
            return float(c)
        if isinstance(c, str):
            return float(Fraction(c))
        raise RingMismatchError(f"{type(c).__name__} coefficient in float ring")
    if ring == "poly":
        if isinstance(c, BivariatePoly):
            return c
        if isinstance(c, (int, Fraction, float, str)):
            return BivariatePoly.const(c)
        raise RingMismatchError(f"{type(c).__name__} coefficient in poly ring")
    raise SeriesError(f"unknown ring {ring!r}")


def zero_of(ring: str):
    return coerce(0, ring)


@dataclass(frozen=True, eq=False)
class PolyhomSeries:
    terms: Mapping[tuple[int, int], object] = field(default_factory=dict)
    trunc: int = 0
    var: str = "d"
    ring: str = "exact"

    def __post_init__(self):
        if self.ring not in RINGS:
            raise SeriesError(f"unknown ring {self.ring!r}")
        if self.var not in VARIABLES:
            raise SeriesError(f"unknown variable tag {self.var!r}")
        clean = {}
        for (i, j), c in self.terms.items():
            if i < 0 or j < 0:
                raise SeriesError(f"negative power or log-degree ({i}, {j})")
            if i == 0 and j > 0:
                raise SeriesError(f"term x^0 (log x)^{j} is not representable")
            if i > self.trunc:
                continue
            c = coerce(c, self.ring)
            if c:
                clean[(int(i), int(j))] = c
        object.__setattr__(self, "terms", clean)

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, trunc: int, var: str = "d", ring: str = "exact") -> PolyhomSeries:
        return cls({}, trunc, var, ring)

    @classmethod
    def monomial(cls, i: int, j: int = 0, c=1, *, trunc: int, var: str = "d",
                 ring: str = "exact") -> PolyhomSeries:
        return cls({(i, j): c}, trunc, var, ring)

    @classmethod
    def from_powers(cls, coeffs: Sequence, trunc: int | None = None, var: str = "d",
                    ring: str = "exact") -> PolyhomSeries:
        """Plain power series from a coefficient list ``[c0, c1, ...]``."""
        if trunc is None:
            trunc = len(coeffs) - 1
        return cls({(i, 0): c for i, c in enumerate(coeffs)}, trunc, var, ring)

    # -- inspection --------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyhomSeries):
            return NotImplemented
        return (self.var, self.ring, self.trunc, self.terms) == (
            other.var, other.ring, other.trunc, other.terms)

    def __repr__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            x = self.var
            parts = []
            for (i, j), c in sorted(self.terms.items()):
                mono = "*".join(p for p in (
                    f"{x}^{i}" if i else "", f"log({x})^{j}" if j else "") if p)
                parts.append(f"({c})*{mono}" if mono else f"({c})")
            body = " + ".join(parts)
        return f"PolyhomSeries[{self.var}, K={self.trunc}, {self.ring}]({body})"

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, i: int, j: int = 0):
        return self.terms.get((i, j), zero_of(self.ring))

    def orders(self) -> list[int]:
        return sorted({i for i, _ in self.terms})

    def order_terms(self, i: int) -> dict[int, object]:
        """Log-degree -> coefficient for the ``x**i`` block."""
        return {j: c for (ii, j), c in self.terms.items() if ii == i}

    def log_degrees(self) -> dict[int, int]:
        """N_i: the largest stored log-degree at each present power."""
        out: dict[int, int] = {}
        for i, j in self.terms:
            out[i] = max(out.get(i, 0), j)
        return dict(sorted(out.items()))

    def log_birth_order(self) -> int | None:
        return min((i for i, j in self.terms if j >= 1), default=None)

    def order_norms(self) -> dict[int, float]:
        """max_j |c[i, j]| for every power i <= trunc (0.0 where absent)."""
        out = {i: 0.0 for i in range(self.trunc + 1)}
        for (i, _), c in self.terms.items():
            mag = float(c.max_abs_coeff()) if isinstance(c, BivariatePoly) else abs(float(c))
            out[i] = max(out[i], mag)
        return out

    def evaluate(self, x: float) -> float:
        if self.ring == "poly":
            raise RingCapabilityError("cannot evaluate a poly-ring series at a point")
        if x <= 0 and any(j for _, j in self.terms):
            raise ValueError("log terms need x > 0")
        lx = math.log(x) if x > 0 else 0.0
        return math.fsum(float(c) * x**i * lx**j for (i, j), c in sorted(self.terms.items()))

    # -- structural transforms --------------------------------------------
    def retrunc(self, trunc: int) -> PolyhomSeries:
        """Re-declare the truncation order, treating stored terms as an exact finite sum."""
        return PolyhomSeries(self.terms, trunc, self.var, self.ring)

    def with_ring(self, ring: str) -> PolyhomSeries:
        return PolyhomSeries({k: coerce(c, ring) for k, c in self.terms.items()},
                             self.trunc, self.var, ring)

    def shift(self, k: int) -> PolyhomSeries:
        """Multiply by x**k (k may be negative if no term would drop below x^0)."""
        if k < 0 and any(i + k < 0 or (i + k == 0 and j > 0) for i, j in self.terms):
            raise SeriesError(f"cannot divide by x^{-k}")
        return PolyhomSeries({(i + k, j): c for (i, j), c in self.terms.items()},
                             self.trunc + k, self.var, self.ring)

    def euler(self) -> PolyhomSeries:
        """x * d/dx; keeps the truncation order."""
        out: dict[tuple[int, int], object] = {}
        for (i, j), c in self.terms.items():
            _acc(out, (i, j), c * i)
            if j:
                _acc(out, (i, j - 1), c * j)
        return PolyhomSeries(out, self.trunc, self.var, self.ring)

    def ddx(self) -> PolyhomSeries:
        return ddx(self)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        return arith("add", self, other)

    def __sub__(self, other):
        return arith("add", self, -other if isinstance(other, PolyhomSeries)
                     else _neg_scalar(other, self.ring))

    def __neg__(self):
        return PolyhomSeries({k: -c for k, c in self.terms.items()},
                             self.trunc, self.var, self.ring)

    def __mul__(self, other):
        if isinstance(other, PolyhomSeries):
            return arith("mul", self, other)
        return arith("scale", self, other)

    def __rmul__(self, other):
        return arith("scale", self, other)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        if self.ring == "poly":
            raise RingCapabilityError("poly-ring series have no JSON form")
        rows = []
        for (i, j), c in sorted(self.terms.items()):
            val = f"{c.numerator}/{c.denominator}" if isinstance(c, Fraction) else float(c)
            rows.append({"i": i, "j": j, "c": val})
        return {"variable": self.var, "trunc": self.trunc, "terms": rows}

    @classmethod
    def from_json(cls, obj: Mapping, ring: str | None = None) -> PolyhomSeries:
        rows = obj["terms"]
        if ring is None:
            ring = "float" if rows and all(not isinstance(r["c"], str) for r in rows) else "exact"
        return cls({(int(r["i"]), int(r["j"])): r["c"] for r in rows},
                   int(obj["trunc"]), obj["variable"], ring)


def _acc(out: dict, key, c) -> None:
    out[key] = out[key] + c if key in out else c


def _neg_scalar(c, ring):
    return -coerce(c, ring)


def _check_compatible(a: PolyhomSeries, b: PolyhomSeries) -> None:
    if a.var != b.var:
        raise VariableMismatchError(f"variable tags differ: {a.var!r} vs {b.var!r}")
    if a.ring != b.ring:
        raise RingMismatchError(f"rings differ: {a.ring!r} vs {b.ring!r}")


def arith(op: str, a: PolyhomSeries, b) -> PolyhomSeries:
    """Term-by-term ``add``, ``mul`` (truncated at the smaller order) or ``scale``."""
    if op == "scale":
        if isinstance(b, PolyhomSeries):
            raise SeriesError("scale expects a coefficient, not a series")
        s = coerce(b, a.ring)
        return PolyhomSeries({k: c * s for k, c in a.terms.items()}, a.trunc, a.var, a.ring)
    if not isinstance(b, PolyhomSeries):
        if op == "add":
            b = PolyhomSeries({(0, 0): b}, a.trunc, a.var, a.ring)
        else:
            return arith("scale", a, b)
    _check_compatible(a, b)
    trunc = min(a.trunc, b.trunc)
    out: dict[tuple[int, int], object] = {}
    if op == "add":
        for k, c in a.terms.items():
            if k[0] <= trunc:
                _acc(out, k, c)
        for k, c in b.terms.items():
            if k[0] <= trunc:
                _acc(out, k, c)
    elif op == "mul":
        for (i1, j1), c1 in a.terms.items():
            if i1 > trunc:
                continue
            for (i2, j2), c2 in b.terms.items():
                if i1 + i2 <= trunc:
                    _acc(out, (i1 + i2, j1 + j2), c1 * c2)
    else:
        raise SeriesError(f"unknown operation {op!r}")
    return PolyhomSeries(out, trunc, a.var, a.ring)


def ddx(a: PolyhomSeries) -> PolyhomSeries:
    """d/dx of a log-power series; the truncation order drops by one."""
    out: dict[tuple[int, int], object] = {}
    for (i, j), c in a.terms.items():
        if i == 0:
            if j:
                raise NotDifferentiableError(f"term x^0 log^{j} x")
            continue
        if i == 1 and j > 0:
            # x * log^j x  ->  log^j x + j log^{j-1} x ; the first piece is unrepresentable
            raise NotDifferentiableError(f"derivative of x log^{j} x leaves the class")
        _acc(out, (i - 1, j), c * i)
        if j:
            _acc(out, (i - 1, j - 1), c * j)
    return PolyhomSeries(out, a.trunc - 1, a.var, a.ring)


def substitute_d_to_t(a: PolyhomSeries) -> PolyhomSeries:
    """Rewrite a d-series in t under d = t**2 / 2 (so log d = 2 log t - log 2)."""
    if a.var != "d":
        raise VariableMismatchError("substitution expects a d-series")
    if a.ring != "float" and any(j for _, j in a.terms):
        raise RingCapabilityError(f"log 2 is not representable in the {a.ring} ring")
    out: dict[tuple[int, int], object] = {}
    log2 = math.log(2.0)
    for (i, j), c in a.terms.items():
        base = c * Fraction(1, 2**i) if a.ring != "float" else c / 2.0**i
        for l in range(j + 1):
            w = math.comb(j, l) * 2**l * (-log2) ** (j - l) if j else 1
            _acc(out, (2 * i, l), base * w)
    return PolyhomSeries(out, 2 * a.trunc, "t", a.ring)


def compose_analytic(f: Sequence, a: PolyhomSeries) -> PolyhomSeries:
    """sum_m f[m] * a**m, truncated at ``a.trunc``; ``a`` must have no constant term."""
    if (0, 0) in a.terms:
        raise SeriesError("compose_analytic needs a series with zero constant term")
    coeffs = [coerce(c, a.ring) for c in f]
    result = PolyhomSeries({(0, 0): coeffs[0]} if coeffs else {}, a.trunc, a.var, a.ring)
    power = a
    for fm in coeffs[1:]:
        if not power:
            break
        result = result + power * fm
        power = power * a
    return result


def residual_order(a: PolyhomSeries) -> int:
    """Smallest power carrying a nonzero coefficient; trunc + 1 for the zero series."""
    return min((i for i, _ in a.terms), default=a.trunc + 1)
