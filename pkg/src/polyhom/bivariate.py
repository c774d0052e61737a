"""Truncation-free polynomials in two variables (d, t) with exact differentiation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[Fraction, float]

_VARS = ("d", "t")


def _coerce_scalar(c) -> Scalar:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, (Fraction, float)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


@dataclass(frozen=True, eq=False)
class BivariatePoly:
    """Polynomial sum c[a, b] * d**a * t**b, stored without zero entries."""

    coeffs: Mapping[tuple[int, int], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (a, b), c in self.coeffs.items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent ({a}, {b})")
            c = _coerce_scalar(c)
            if c:
                clean[(int(a), int(b))] = c
        object.__setattr__(self, "coeffs", clean)

    # -- constructors ------------------------------------------------------
    @classmethod
    def const(cls, c) -> BivariatePoly:
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, a: int, b: int, c=1) -> BivariatePoly:
        return cls({(a, b): c})

    # -- structure ---------------------------------------------------------
    @property
    def max_total_degree(self) -> int:
        """Largest a + b over stored terms; -1 for the zero polynomial."""
        return max((a + b for a, b in self.coeffs), default=-1)

    def min_degree(self, var: str = "d") -> int | None:
        k = _VARS.index(var)
        return min((m[k] for m in self.coeffs), default=None)

    def is_divisible_by_d(self, power: int) -> bool:
        low = self.min_degree("d")
        return low is None or low >= power

    def max_abs_coeff(self) -> Scalar:
        return max((abs(c) for c in self.coeffs.values()), default=Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, BivariatePoly):
            return self.coeffs == other.coeffs
        try:
            other = _coerce_scalar(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == ({(0, 0): other} if other else {})

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "BivariatePoly(0)"
        parts = []
        for (a, b), c in sorted(self.coeffs.items()):
            mono = "*".join(
                p for p in (f"d^{a}" if a else "", f"t^{b}" if b else "") if p
            )
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return "BivariatePoly(" + " + ".join(parts) + ")"

    # -- ring operations ---------------------------------------------------
    def __add__(self, other) -> BivariatePoly:
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return BivariatePoly(out)

    __radd__ = __add__

    def __neg__(self) -> BivariatePoly:
        return BivariatePoly({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other) -> BivariatePoly:
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> BivariatePoly:
        return (-self) + other

    def __mul__(self, other) -> BivariatePoly:
        if isinstance(other, BivariatePoly):
            out: dict[tuple[int, int], Scalar] = {}
            for (a1, b1), c1 in self.coeffs.items():
                for (a2, b2), c2 in other.coeffs.items():
                    key = (a1 + a2, b1 + b2)
                    out[key] = out.get(key, 0) + c1 * c2
            return BivariatePoly(out)
        try:
            s = _coerce_scalar(other)
        except TypeError:
            return NotImplemented
        return BivariatePoly({m: c * s for m, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, other) -> BivariatePoly:
        s = _coerce_scalar(other)
        return BivariatePoly({m: c / s for m, c in self.coeffs.items()})

    # -- calculus ----------------------------------------------------------
    def diff(self, var: str = "d", order: int = 1) -> BivariatePoly:
        k = _VARS.index(var)
        out = self.coeffs
        for _ in range(order):
            nxt = {}
            for m, c in out.items():
                if m[k] == 0:
                    continue
                lowered = (m[0] - 1, m[1]) if k == 0 else (m[0], m[1] - 1)
                nxt[lowered] = c * m[k]
            out = nxt
        return BivariatePoly(out)

    def mul_d(self, power: int = 1) -> BivariatePoly:
        return BivariatePoly({(a + power, b): c for (a, b), c in self.coeffs.items()})

    def div_d(self, power: int = 1) -> BivariatePoly:
        """Exact division by d**power; raises ArithmeticError if a term would go negative."""
        if not self.is_divisible_by_d(power):
            raise ArithmeticError(
                f"polynomial not divisible by d^{power} (lowest d-degree {self.min_degree('d')})"
            )
        return BivariatePoly({(a - power, b): c for (a, b), c in self.coeffs.items()})

    def evaluate(self, d: float, t: float) -> float:
        return float(sum(float(c) * d**a * t**b for (a, b), c in self.coeffs.items()))

    # -- serialization -----------------------------------------------------
    def to_table(self) -> list[list]:
        return [[a, b, _scalar_to_json(c)] for (a, b), c in sorted(self.coeffs.items())]

    @classmethod
    def from_table(cls, rows: Iterable) -> BivariatePoly:
        return cls({(int(a), int(b)): _scalar_from_json(c) for a, b, c in rows})


def _as_poly(x):
    if isinstance(x, BivariatePoly):
        return x
    try:
        return BivariatePoly.const(_coerce_scalar(x))
    except TypeError:
        return NotImplemented


def _scalar_to_json(c):
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return float(c)


def _scalar_from_json(c):
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, int):
        return Fraction(c)
    return float(c)


def parse_poly(text: str) -> BivariatePoly:
    """Parse ``"d:1, t^2:-3/2, d^2*t:5"`` (monomial:coefficient pairs) into a polynomial.

    The monomial ``1`` denotes the constant term.
    """
    out: dict[tuple[int, int], Scalar] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        mono, sep, coeff = item.rpartition(":")
        if not sep:
            raise ValueError(f"expected monomial:coefficient, got {item!r}")
        a = b = 0
        for factor in mono.replace(" ", "").split("*"):
            if factor in ("", "1"):
                continue
            base, _, exp = factor.partition("^")
            e = int(exp) if exp else 1
            if base == "d":
                a += e
            elif base == "t":
                b += e
            else:
                raise ValueError(f"unknown variable {base!r} in {item!r}")
        out[(a, b)] = out.get((a, b), 0) + Fraction(coeff.strip())
    return BivariatePoly(out)
