"""Least-squares power-law fits in log-log coordinates."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import InvalidArgument


@dataclass(frozen=True)
class FitResult:
    exponent: float
    intercept: float
    r_squared: float
    n_points: int

    def predict(self, x):
        return np.exp(self.intercept) * np.asarray(x, dtype=np.float64) ** self.exponent


def fit_power_law(xs, ys) -> FitResult:
    """Fit y = C x^p by ordinary least squares on (log x, log y)."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise InvalidArgument("xs and ys must be 1-D sequences of equal length")
    if x.size < 3:
        raise InvalidArgument(f"need at least 3 points, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise InvalidArgument("non-finite input to power-law fit")
    if np.any(x <= 0) or np.any(y <= 0):
        raise InvalidArgument("power-law fit needs strictly positive xs and ys")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(lx) == 0:
        raise InvalidArgument("xs must not all be equal")
    if np.ptp(ly) == 0:
        return FitResult(0.0, float(ly[0]), 1.0, int(x.size))
    res = stats.linregress(lx, ly)
    r2 = float(np.clip(res.rvalue**2, 0.0, 1.0))
    return FitResult(float(res.slope), float(res.intercept), r2, int(x.size))
