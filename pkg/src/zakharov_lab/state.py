"""Physical and first-order Zakharov states and initial-data generators.

The physical state holds ``(u, n, v)`` with ``v = A^(-1/2) n_t``; the first-order
state holds ``(u, n_plus, n_minus)`` with ``n_pm = n +- i v``.  All arrays are
physical-space samples on the state's grid.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation, InconsistentState, InvalidArgument
from .spectral import Field, SpectralGrid

MEAN_TOL = 1e-12
CONJ_TOL = 1e-8


def _scale(*arrays) -> float:
    return max([1.0] + [float(np.max(np.abs(a))) for a in arrays if a.size])


@dataclass(frozen=True, eq=False)
class ZakharovState:
    grid: SpectralGrid
    u: np.ndarray
    n: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", np.asarray(self.u, dtype=np.complex128))
        object.__setattr__(self, "n", np.asarray(self.n, dtype=np.float64))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=np.float64))

    def field(self, name: str) -> Field:
        return Field(self.grid, getattr(self, name))


@dataclass(frozen=True, eq=False)
class FirstOrderState:
    grid: SpectralGrid
    u: np.ndarray
    n_plus: np.ndarray
    n_minus: np.ndarray

    def __post_init__(self):
        for name in ("u", "n_plus", "n_minus"):
            object.__setattr__(
                self, name, np.asarray(getattr(self, name), dtype=np.complex128)
            )

    @classmethod
    def from_plus(cls, grid: SpectralGrid, u, n_plus) -> "FirstOrderState":
        n_plus = np.asarray(n_plus, dtype=np.complex128)
        return cls(grid, u, n_plus, np.conj(n_plus))

    @property
    def n(self) -> np.ndarray:
        return 0.5 * (self.n_plus + self.n_minus).real

    def conjugacy_error(self) -> float:
        return float(np.max(np.abs(self.n_minus - np.conj(self.n_plus)), initial=0.0))

    def check_conjugacy(self, tol: float = CONJ_TOL) -> None:
        err = self.conjugacy_error()
        if err > tol * _scale(self.n_plus):
            raise InconsistentState(f"n_minus != conj(n_plus): max deviation {err:.3e}")

    def field(self, name: str) -> Field:
        return Field(self.grid, getattr(self, name))


def to_first_order(s: ZakharovState) -> FirstOrderState:
    scale = _scale(s.n, s.v)
    for name in ("n", "v"):
        mean = float(np.mean(getattr(s, name)))
        if abs(mean) > MEAN_TOL * scale:
            raise ConstraintViolation(f"mean({name}) = {mean:.3e}, must vanish")
    n_plus = s.n + 1j * s.v
    return FirstOrderState(s.grid, s.u.copy(), n_plus, np.conj(n_plus))


def from_first_order(f: FirstOrderState) -> ZakharovState:
    f.check_conjugacy()
    return ZakharovState(f.grid, f.u.copy(), f.n_plus.real.copy(), f.n_plus.imag.copy())


def _complex_gaussians(rng: np.random.Generator, count: int) -> np.ndarray:
    draws = rng.standard_normal((count, 2))
    return (draws[:, 0] + 1j * draws[:, 1]) / np.sqrt(2.0)


def _noise_by_mode(grid: SpectralGrid, rng: np.random.Generator) -> np.ndarray:
    k = grid.k_index
    half = grid.M // 2
    draws = _complex_gaussians(rng, 2 * half + 1)
    # slot for mode k: 0 -> 0, +j -> 2j-1, -j -> 2j
    slot = np.where(k > 0, 2 * k - 1, -2 * k)
    return draws[slot]


def _hermitian_noise(grid: SpectralGrid, rng: np.random.Generator) -> np.ndarray:
    g = _noise_by_mode(grid, rng)
    k = grid.k_index
    nyq = grid.M // 2
    mirror = (k < 0) & (k != -nyq)
    out = g.copy()
    out[mirror] = np.conj(g[-k[mirror]])  # index of mode +j is j
    out[nyq] = np.sqrt(2.0) * g[nyq].real
    out[0] = 0.0
    return out


def sample_rough_data(
    grid: SpectralGrid,
    s: float,
    eps: float = 0.01,
    amp: float = 1.0,
    seed: int = 0,
) -> ZakharovState:
    """Random data with u in H^sigma exactly for sigma < s + eps.

    uhat_k = amp <xi_k>^-(s+1/2+eps) g_k, and n, v get the exponent
    -(s-1/2+eps) with Hermitian-symmetric noise; n and v have zero mean.
    """
    if not (0.5 < s < 1):
        raise InvalidArgument(f"s must lie in (1/2, 1), got {s}")
    if eps <= 0:
        raise InvalidArgument(f"eps must be positive, got {eps}")
    rng = np.random.default_rng(seed)
    bracket = grid.bracket(1.0)
    u_hat = amp * bracket ** (-(s + 0.5 + eps)) * _noise_by_mode(grid, rng)
    wave_amp = amp * bracket ** (-(s - 0.5 + eps))
    n_hat = wave_amp * _hermitian_noise(grid, rng)
    v_hat = wave_amp * _hermitian_noise(grid, rng)
    u = grid.to_physical(u_hat)
    n = grid.to_physical(n_hat).real
    v = grid.to_physical(v_hat).real
    n -= n.mean()
    v -= v.mean()
    return ZakharovState(grid, u, n, v)


def soliton_profile(grid: SpectralGrid, a: float, c: float, x0: float, t: float = 0.0):
    """Exact traveling wave (u, n) of the Zakharov system at time t.

    u = sqrt(2(1-c^2)) a sech(a(x - x0 - ct)) exp(i(cx/2 - (c^2/4 - a^2) t)),
    n = -|u|^2 / (1 - c^2).  The center is wrapped into the periodic box.
    """
    if abs(c) >= 1:
        raise InvalidArgument(f"soliton speed must satisfy |c| < 1, got {c}")
    xi = grid.xs - x0 - c * t
    xi = (xi + 0.5 * grid.L) % grid.L - 0.5 * grid.L
    amp = np.sqrt(2 * (1 - c * c)) * a
    env = amp / np.cosh(a * xi)
    phase = c * grid.xs / 2 - (c * c / 4 - a * a) * t
    u = env * np.exp(1j * phase)
    n = -(env**2) / (1 - c * c)
    return u, n


def soliton_state(
    grid: SpectralGrid, a: float = 1.0, c: float = 0.5, x0: float | None = None
) -> ZakharovState:
    """Traveling-wave state with n shifted to zero mean.

    Removing the mean of n (which equals -4a/L) leaves the wave equation
    untouched and rotates u by the global phase exp(i nbar t); see
    :func:`soliton_exact`.
    """
    if abs(c) >= 1:
        raise InvalidArgument(f"supersonic soliton: |c| = {abs(c)} >= 1")
    if a <= 0:
        raise InvalidArgument(f"width parameter must be positive, got {a}")
    if x0 is None:
        x0 = 0.5 * grid.L
    u, n = soliton_profile(grid, a, c, x0)
    n = n - n.mean()
    n_hat = grid.to_spectral(n)
    # v = A^(-1/2) n_t with n_t = -c n_x  ->  vhat = -i c sign(xi) nhat
    sign = np.sign(grid.ks) * grid.odd_mask()
    v = grid.to_physical(-1j * c * sign * n_hat).real
    return ZakharovState(grid, u, n, v)


def soliton_exact(grid: SpectralGrid, a: float, c: float, x0: float, t: float) -> np.ndarray:
    """u(t) for the mean-corrected soliton produced by :func:`soliton_state`."""
    u, n = soliton_profile(grid, a, c, x0, t)
    nbar = float(np.mean(soliton_profile(grid, a, c, x0)[1]))
    return u * np.exp(1j * nbar * t)


def soliton_residual(grid: SpectralGrid, a: float, c: float, x0: float | None = None) -> tuple[float, float]:
    """Max pointwise residuals of the Schroedinger and wave equations for the ansatz.

    Spatial derivatives are spectral; time derivatives use the traveling-wave
    relations u_t = -c u_x + i(c^2/2 - Omega) u with Omega = c^2/4 - a^2, and
    n_tt = c^2 n_xx.
    """
    if x0 is None:
        x0 = 0.5 * grid.L
    u, n = soliton_profile(grid, a, c, x0)
    k = grid.ks
    odd = grid.odd_mask()
    u_hat = grid.to_spectral(u)
    u_x = grid.to_physical(1j * k * odd * u_hat)
    u_xx = grid.to_physical(-(k**2) * u_hat)
    omega = c * c / 4 - a * a
    u_t = -c * u_x + 1j * (c * c / 2 - omega) * u
    r1 = 1j * u_t + u_xx - n * u
    n_xx = grid.to_physical(-(k**2) * grid.to_spectral(n))
    rho_xx = grid.to_physical(-(k**2) * grid.to_spectral(np.abs(u) ** 2))
    r2 = c * c * n_xx - n_xx - rho_xx
    return float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))
