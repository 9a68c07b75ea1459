"""Strang splitting for the first-order Zakharov system.

    i u_t + u_xx = n u,       n = (n+ + n-)/2
    i n+_t - A^(1/2) n+ = A^(1/2) |u|^2,   n- = conj(n+)

Both substeps are solved exactly: the linear part by Fourier phases, the
nonlinear part pointwise because n and |u|^2 are frozen along it.  With
dealiasing on, the two-thirds filter P is applied to n in the u-equation and
to |u|^2 in the wave forcing; the resulting semi-discrete system conserves
mass exactly and the energy with coupling int (P n)|u|^2.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BlowUpDetected, InvalidArgument
from .spectral import SpectralGrid
from .state import FirstOrderState


@dataclass(frozen=True)
class SolverConfig:
    dt: float
    T: float
    record_stride: int = 1
    dealias: bool = True

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidArgument(f"dt must be positive, got {self.dt}")
        if not self.T >= self.dt:
            raise InvalidArgument(f"T = {self.T} must be at least dt = {self.dt}")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise InvalidArgument(f"record_stride must be a positive integer, got {self.record_stride}")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.T / self.dt)))


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: list = field(repr=False)
    config: SolverConfig | None
    grid: SpectralGrid

    def __len__(self):
        return len(self.states)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    def component(self, name: str, spectral: bool = True) -> np.ndarray:
        """Space-time array of shape (len(times), M) for ``u``, ``n_plus`` or ``n_minus``."""
        arr = np.stack([getattr(st, name) for st in self.states])
        return self.grid.to_spectral(arr) if spectral else arr


class _Stepper:
    """Array-level Strang stepper holding u (physical) and n+ (spectral)."""

    def __init__(self, grid: SpectralGrid, dealias: bool = True):
        self.grid = grid
        self.P = grid.dealias_mask().astype(np.float64) if dealias else np.ones(grid.M)
        self.abs_k = np.abs(grid.ks)
        self.half_deriv_P = self.abs_k * self.P
        self._phase_cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}

    def _phases(self, tau: float):
        ph = self._phase_cache.get(tau)
        if ph is None:
            ph = (np.exp(-1j * self.grid.ks**2 * tau), np.exp(-1j * self.abs_k * tau))
            self._phase_cache[tau] = ph
        return ph

    def linear(self, u, np_hat, tau):
        pu, pn = self._phases(tau)
        g = self.grid
        return g.to_physical(pu * g.to_spectral(u)), pn * np_hat

    def nonlinear(self, u, np_hat, tau):
        g = self.grid
        n_filt = g.to_physical(self.P * np_hat).real  # P n, since n = Re n+
        forcing = self.half_deriv_P * g.to_spectral(np.abs(u) ** 2)
        return u * np.exp(-1j * tau * n_filt), np_hat - 1j * tau * forcing

    def step(self, u, np_hat, dt):
        u, np_hat = self.nonlinear(u, np_hat, 0.5 * dt)
        u, np_hat = self.linear(u, np_hat, dt)
        return self.nonlinear(u, np_hat, 0.5 * dt)

    def state(self, u, np_hat) -> FirstOrderState:
        n_plus = self.grid.to_physical(np_hat)
        return FirstOrderState(self.grid, u.copy(), n_plus, np.conj(n_plus))


def linear_flow(f: FirstOrderState, tau: float) -> FirstOrderState:
    """Free evolution: uhat *= exp(-i xi^2 tau), n+-hat *= exp(-+ i |xi| tau)."""
    g = f.grid
    k = g.ks
    u = g.to_physical(np.exp(-1j * k**2 * tau) * g.to_spectral(f.u))
    npl = g.to_physical(np.exp(-1j * np.abs(k) * tau) * g.to_spectral(f.n_plus))
    nmi = g.to_physical(np.exp(1j * np.abs(k) * tau) * g.to_spectral(f.n_minus))
    return FirstOrderState(g, u, npl, nmi)


def nonlinear_flow(f: FirstOrderState, tau: float, dealias: bool = True) -> FirstOrderState:
    """Exact flow of i u_t = n u, i n+-_t = +-A^(1/2)|u|^2 (n and |u|^2 are frozen)."""
    f.check_conjugacy()
    g = f.grid
    P = g.dealias_mask().astype(np.float64) if dealias else np.ones(g.M)
    n_hat = g.to_spectral(f.n)
    n_filt = g.to_physical(P * n_hat).real
    forcing = g.to_physical(np.abs(g.ks) * P * g.to_spectral(np.abs(f.u) ** 2)).real
    u = f.u * np.exp(-1j * tau * n_filt)
    return FirstOrderState(g, u, f.n_plus - 1j * tau * forcing, f.n_minus + 1j * tau * forcing)


def strang_step(f: FirstOrderState, dt: float, dealias: bool = True) -> FirstOrderState:
    """nonlinear(dt/2) o linear(dt) o nonlinear(dt/2)."""
    f = nonlinear_flow(f, 0.5 * dt, dealias)
    f = linear_flow(f, dt)
    return nonlinear_flow(f, 0.5 * dt, dealias)


def solve(f0: FirstOrderState, cfg: SolverConfig, t0: float = 0.0) -> Trajectory:
    """Integrate from ``t0`` for ``cfg.n_steps`` steps, keeping every
    ``record_stride``-th state.  Negative ``cfg.dt`` is not allowed; use
    :func:`solve_backward` for reversed time."""
    return _integrate(f0, cfg.dt, cfg, t0)


def solve_backward(f0: FirstOrderState, cfg: SolverConfig, t0: float = 0.0) -> Trajectory:
    """Integrate toward negative times; the returned trajectory is time-ordered."""
    traj = _integrate(f0, -cfg.dt, cfg, t0)
    return Trajectory(traj.times[::-1].copy(), traj.states[::-1], cfg, traj.grid)


def _integrate(f0: FirstOrderState, dt: float, cfg: SolverConfig, t0: float) -> Trajectory:
    f0.check_conjugacy()
    g = f0.grid
    stepper = _Stepper(g, cfg.dealias)
    u = f0.u.copy()
    np_hat = g.to_spectral(f0.n_plus)
    stride = int(cfg.record_stride)
    states = [stepper.state(u, np_hat)]
    steps = [0]
    for i in range(1, cfg.n_steps + 1):
        u, np_hat = stepper.step(u, np_hat, dt)
        if not (np.isfinite(u).all() and np.isfinite(np_hat).all()):
            last = t0 + (i - 1) * dt
            err = BlowUpDetected(f"non-finite values at step {i}", last_valid_time=last)
            times = t0 + np.asarray(steps, dtype=np.float64) * dt
            err.partial = Trajectory(times, states, cfg, g)
            raise err
        if i % stride == 0:
            states.append(stepper.state(u, np_hat))
            steps.append(i)
    times = t0 + np.asarray(steps, dtype=np.float64) * dt
    return Trajectory(times, states, cfg, g)
