"""Convergent-vs-Gevrey classification of coefficient-norm sequences."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

CONVERGENT = "CONVERGENT"
GEVREY = "GEVREY"
UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class GrowthThresholds:
    convergent_sigma: float = 0.15
    max_fit_residual: float = 0.5      # RMS, natural-log units
    superlinear_slope: float = 0.5     # log-log slope of Domb-Sykes ratios that means "no radius"


@dataclass
class GrowthFit:
    radius_estimate: float | None
    gevrey_order: float
    fit_residual: float
    classification: str
    log_B: float = float("nan")
    points: int = 0

    def label(self) -> str:
        if self.classification == GEVREY:
            return f"GEVREY({self.gevrey_order:.2f})"
        return self.classification

    def to_json(self) -> dict:
        out = asdict(self)
        out["label"] = self.label()
        return out


def _nonzero_run(norms: Sequence[float], k0: int) -> tuple[np.ndarray, np.ndarray]:
    """Indices and values of the nonzero prefix after dropping leading zeros."""
    vals = [abs(float(x)) for x in norms]
    start = 0
    while start < len(vals) and vals[start] == 0.0:
        start += 1
    stop = start
    while stop < len(vals) and vals[stop] != 0.0 and math.isfinite(vals[stop]):
        stop += 1
    ks = np.arange(k0 + start, k0 + stop, dtype=float)
    return ks, np.array(vals[start:stop])


def radius_estimate(norms: Sequence[float], k0: int = 1,
                    thresholds: GrowthThresholds = GrowthThresholds()) -> float | None:
    """Domb-Sykes estimate: fit a_{k+1}/a_k = 1/R + b/k and return R.

    ``norms[i]`` is |a_k| with k = k0 + i.  Returns None when the ratios grow
    (zero radius) and ``inf`` when they extrapolate to zero.
    """
    ks, a = _nonzero_run(norms, k0)
    if len(a) < 6:
        raise ValueError("radius_estimate needs at least 6 nonzero entries")
    if ks[0] <= 0:
        ks, a = ks[1:], a[1:]
    ratios = a[1:] / a[:-1]
    kk = ks[:-1]
    half = len(ratios) // 2
    slope = np.polyfit(np.log(kk[half:]), np.log(ratios[half:]), 1)[0]
    if slope > thresholds.superlinear_slope:
        return None
    intercept = np.polyfit(1.0 / kk, ratios, 1)[1]
    if intercept <= 0:
        return math.inf
    return float(1.0 / intercept)


def stirling_design(ks: np.ndarray) -> np.ndarray:
    """Columns (k log k - k, k, log k, 1) of the Gevrey growth model."""
    return np.column_stack([ks * np.log(ks) - ks, ks, np.log(ks), np.ones_like(ks)])


def gevrey_fit(norms: Sequence[float], k0: int = 1,
               thresholds: GrowthThresholds = GrowthThresholds()) -> GrowthFit:
    """Least-squares fit log a_k = sigma (k log k - k) + k log B + p log k + c.

    The log k column soaks up the Stirling half-power and polynomial prefactors,
    so sigma is the Gevrey order.  Classification follows ``thresholds``.
    """
    ks, a = _nonzero_run(norms, k0)
    if len(a) == 0:
        return GrowthFit(None, float("nan"), float("nan"), UNKNOWN)
    if ks[0] <= 0:
        ks, a = ks[1:], a[1:]
    if len(a) < 8:
        raise ValueError("gevrey_fit needs at least 8 nonzero entries")
    y = np.log(a)
    X = stirling_design(ks)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    rms = float(np.sqrt(np.mean((y - X @ coef) ** 2)))
    sigma = float(coef[0])
    try:
        radius = radius_estimate(a, int(ks[0]), thresholds)
    except ValueError:
        radius = None
    if sigma < thresholds.convergent_sigma and radius is not None and 0 < radius < math.inf:
        label = CONVERGENT
    elif rms < thresholds.max_fit_residual and sigma >= thresholds.convergent_sigma:
        label = GEVREY
    else:
        label = UNKNOWN
    return GrowthFit(radius, sigma, rms, label, float(coef[1]), len(a))
