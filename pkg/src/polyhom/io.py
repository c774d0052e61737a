"""Config parsing and JSON/CSV emitters shared by the CLI and scripts."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .cma_model import assemble_model
from .fuchsian import FuchsianProblem
from .series import PolyhomSeries


@dataclass
class ProblemConfig:
    n: int = 2
    K: int = 8
    form: str = "d"
    forcing: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    C1: dict[int, Fraction] = field(default_factory=dict)
    Cd: dict[int, Fraction] = field(default_factory=dict)
    free: dict[int, Fraction] = field(default_factory=dict)
    nonlinearity: str = "none"

    def problem(self) -> FuchsianProblem:
        return assemble_model(self.n, self.form, C1=self.C1 or None, Cd=self.Cd or None,
                              forcing=self.forcing, nonlinearity=self.nonlinearity,
                              free=self.free)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def apply_setting(cfg: ProblemConfig, key: str, value: str) -> None:
    key = key.strip()
    value = value.strip()
    parts = key.split(".")
    if key in ("n", "K"):
        setattr(cfg, key, int(value))
    elif key == "form":
        cfg.form = value
    elif key == "nonlinearity":
        if value not in ("none", "model"):
            raise ValueError(f"nonlinearity must be none or model, got {value!r}")
        cfg.nonlinearity = value
    elif parts[0] == "forcing" and len(parts) in (2, 3):
        j = int(parts[2]) if len(parts) == 3 else 0
        cfg.forcing[(int(parts[1]), j)] = _rational(value)
    elif parts[0] == "perturb" and len(parts) == 3 and parts[1] in ("C1", "Cd"):
        getattr(cfg, parts[1])[int(parts[2])] = _rational(value)
    elif parts[0] == "free" and len(parts) == 2:
        cfg.free[int(parts[1])] = _rational(value)
    else:
        raise ValueError(f"unknown config key {key!r}")


def parse_problem_config(text: str, cfg: ProblemConfig | None = None) -> ProblemConfig:
    """Line-oriented ``key=value``; ``#`` starts a comment."""
    cfg = cfg or ProblemConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected key=value")
        apply_setting(cfg, key, value)
    return cfg


def parse_forcing_flag(text: str) -> dict[tuple[int, int], Fraction]:
    """``"3:1, 2:-1/2, 4.1:3"`` -> {(3,0): 1, (2,0): -1/2, (4,1): 3}."""
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, val = item.partition(":")
        if not sep:
            raise ValueError(f"expected power:coefficient, got {item!r}")
        i, _, j = key.partition(".")
        out[(int(i), int(j) if j else 0)] = _rational(val)
    return out


def parse_power_map(text: str, sep: str = ":") -> dict[int, Fraction]:
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, found, val = item.partition(sep)
        if not found:
            raise ValueError(f"expected m{sep}value, got {item!r}")
        out[int(key)] = _rational(val)
    return out


def _clean(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def series_csv(s: PolyhomSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "coefficient"])
    for (i, j), c in sorted(s.terms.items()):
        w.writerow([i, j, f"{c.numerator}/{c.denominator}" if isinstance(c, Fraction) else repr(c)])
    return buf.getvalue()


def table_csv(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(header))
    for row in rows:
        w.writerow([f"{x:.17g}" if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def read_norms_csv(text: str) -> tuple[int, list[float]]:
    """Parse (k, norm) rows; returns the first k and the norms in k order."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r and r[0].strip()]
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    pairs = sorted((int(r[0]), float(r[1])) for r in rows)
    if not pairs:
        raise ValueError("no (k, norm) rows")
    ks = [k for k, _ in pairs]
    if ks != list(range(ks[0], ks[0] + len(ks))):
        raise ValueError("k values must be consecutive")
    return ks[0], [v for _, v in pairs]


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
