"""The smoothing multiplier I_N and the smooth time cutoff psi_delta."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .spectral import Field, SpectralGrid


def smoothstep(r):
    r = np.clip(r, 0.0, 1.0)
    return r * r * (3.0 - 2.0 * r)


def multiplier_symbol(xi, N: float, s: float) -> np.ndarray:
    """m_N(xi): 1 for |xi| <= N, (N/|xi|)^(1-s) for |xi| >= 2N.

    On [N, 2N] the exponent is blended with a C^1 smoothstep in log2(|xi|/N),
    which keeps the symbol monotone and C^1 at both ends.
    """
    if not N > 0:
        raise InvalidArgument(f"N must be positive, got {N}")
    if not (0.5 < s <= 1):
        raise InvalidArgument(f"s must lie in (1/2, 1], got {s}")
    a = np.abs(np.asarray(xi, dtype=np.float64))
    out = np.ones_like(a)
    high = a > N
    r = np.log2(a[high] / N)
    out[high] = (N / a[high]) ** ((1.0 - s) * smoothstep(r))
    return out


@dataclass(frozen=True, eq=False)
class Multiplier:
    N: float
    s: float
    symbol: np.ndarray
    grid: SpectralGrid


def make_multiplier(grid: SpectralGrid, N: float, s: float) -> Multiplier:
    return Multiplier(float(N), float(s), multiplier_symbol(grid.ks, N, s), grid)


def identity_multiplier(grid: SpectralGrid, s: float = 1.0) -> Multiplier:
    """I = id, realised as N above the Nyquist frequency."""
    return make_multiplier(grid, 2.0 * grid.xi_max, s)


def apply_I_coeffs(coeffs: np.ndarray, m: Multiplier) -> np.ndarray:
    return m.symbol * coeffs


def apply_I(f: Field, m: Multiplier) -> Field:
    if not f.grid.same_as(m.grid):
        raise InvalidArgument("field and multiplier live on different grids")
    return f.with_spectrum(m.symbol * f.spectrum())


def _bump_transition(r):
    """C-infinity step from 1 (r <= 0) to 0 (r >= 1)."""
    r = np.asarray(r, dtype=np.float64)
    out = np.zeros_like(r)
    out[r <= 0] = 1.0
    mid = (r > 0) & (r < 1)
    x = r[mid]
    a = np.exp(-1.0 / (1.0 - x))
    b = np.exp(-1.0 / x)
    out[mid] = a / (a + b)
    return out


def cutoff_profile(t) -> np.ndarray:
    """psi(t): 1 on [-1, 1], 0 outside (-2, 2), smooth, even, in [0, 1]."""
    return _bump_transition(np.abs(np.asarray(t, dtype=np.float64)) - 1.0)


@dataclass(frozen=True, eq=False)
class CutoffWindow:
    delta: float
    center: float
    times: np.ndarray
    samples: np.ndarray


def make_cutoff(delta: float, t_grid, center: float = 0.0, min_points: int = 16) -> CutoffWindow:
    """Sample psi_delta(t - center) = psi((t - center)/delta) on ``t_grid``."""
    if not delta > 0:
        raise InvalidArgument(f"delta must be positive, got {delta}")
    t = np.asarray(t_grid, dtype=np.float64)
    inside = np.count_nonzero(np.abs(t - center) < 2 * delta)
    if inside < min_points:
        raise InvalidArgument(
            f"time grid has {inside} points inside the cutoff support, need {min_points}"
        )
    return CutoffWindow(float(delta), float(center), t, cutoff_profile((t - center) / delta))
