"""Space-time restriction norms and empirical testers for the linear and
bilinear Strichartz-type estimates.

Norm surrogates
---------------
For a sampled space-time function with spatial coefficients ``fhat(xi, t_j)``
the X^{m,b}_phi norm is evaluated by demodulating with the free phase,

    g(xi, t) = exp(i t phi(xi)) psi(t) fhat(xi, t),

so that ``<tau + phi(xi)>`` becomes ``<tau'>`` for the temporal frequency tau'
of g.  The temporal transform is the unitary one, approximated by a zero-padded
FFT, and the spatial measure is the Parseval one (``L sum_k``).  With m = b = 0
and no window the result is exactly the discrete space-time L^2 norm.

Estimate testers
----------------
The inequalities are posed on the line.  The testers use localized packets
on a torus long enough that the packets cross once, near the window center,
without wrapping around.  Left-hand sides are computed by time quadrature of
spatial integrals after shifting each factor's spectrum to the origin (the
modulus of the integrand is unchanged), so the grid only has to resolve the
packet envelopes.  Right-hand sides are evaluated with the norm surrogates on
the same windowed free evolutions.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .errors import InvalidArgument
from .fitting import FitResult, fit_power_law
from .imethod import CutoffWindow, cutoff_profile
from .spectral import SpectralGrid, make_grid
from .solver import Trajectory
from .state import FirstOrderState

PhaseKind = Literal["schrodinger", "wave_plus", "wave_minus"]
Profile = Literal["gaussian-bump", "random-band"]

PHASES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "schrodinger": lambda xi: xi**2,
    "wave_plus": np.abs,
    "wave_minus": lambda xi: -np.abs(xi),
}
COMPONENT = {"schrodinger": "u", "wave_plus": "n_plus", "wave_minus": "n_minus"}
PAD_FACTOR = 4


@dataclass(frozen=True)
class NormSpec:
    """Selects X^{m,b}_phi (kind "X") or Y^m_phi (kind "Y", b unused)."""

    m: float = 0.0
    b: float = 0.5
    phase: PhaseKind = "schrodinger"
    kind: Literal["X", "Y"] = "X"
    eps_b: float = 0.1
    eps_m: float = 0.01

    def __post_init__(self):
        if self.phase not in PHASES:
            raise InvalidArgument(f"unknown phase kind {self.phase!r}")
        if self.kind not in ("X", "Y"):
            raise InvalidArgument(f"norm kind must be 'X' or 'Y', got {self.kind!r}")
        if not (self.eps_b > 0 and self.eps_m > 0):
            raise InvalidArgument("eps_b and eps_m must be positive")

    @property
    def b_plus(self) -> float:
        return self.b + self.eps_b

    @property
    def m_plus(self) -> float:
        return self.m + self.eps_m

    def symbol(self, xi):
        return PHASES[self.phase](np.asarray(xi, dtype=np.float64))


def _uniform_step(times: np.ndarray) -> float:
    t = np.asarray(times, dtype=np.float64)
    if t.ndim != 1 or t.size < 2:
        raise InvalidArgument("need at least two sample times")
    steps = np.diff(t)
    dt = float(steps.mean())
    if not dt > 0 or np.max(np.abs(steps - dt)) > 1e-9 * max(1.0, abs(dt)):
        raise InvalidArgument("sample times must be uniformly spaced and increasing")
    return dt


def window_samples(window: CutoffWindow | None, times: np.ndarray) -> np.ndarray | None:
    """psi_delta(t - center) on ``times``; the window must fit inside them."""
    if window is None:
        return None
    t = np.asarray(times, dtype=np.float64)
    dt = _uniform_step(t)
    lo, hi = window.center - 2 * window.delta, window.center + 2 * window.delta
    if lo < t[0] - dt or hi > t[-1] + dt:
        raise InvalidArgument(
            f"window support [{lo:.6g}, {hi:.6g}] exceeds the sampled range "
            f"[{t[0]:.6g}, {t[-1]:.6g}]"
        )
    return cutoff_profile((t - window.center) / window.delta)


def temporal_spectrum(coeffs, times, xi, phase: PhaseKind, window=None, pad: int = PAD_FACTOR):
    """Demodulated unitary temporal transform of ``coeffs`` (shape (K, n_xi)).

    Returns ``(tau, G)`` with G[l, k] approximating
    (2 pi)^(-1/2) int exp(-i t tau_l) exp(i t phi(xi_k)) w(t) fhat(xi_k, t) dt.
    """
    t = np.asarray(times, dtype=np.float64)
    dt = _uniform_step(t)
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.ndim != 2 or c.shape[0] != t.size:
        raise InvalidArgument(f"coefficient array {c.shape} does not match {t.size} times")
    g = c * np.exp(1j * np.outer(t, PHASES[phase](np.asarray(xi, dtype=np.float64))))
    if window is not None:
        g *= np.asarray(window, dtype=np.float64)[:, None]
    n_pad = int(pad) * t.size
    G = np.fft.fft(g, n=n_pad, axis=0) * (dt / np.sqrt(2 * np.pi))
    tau = 2 * np.pi * np.fft.fftfreq(n_pad, d=dt)
    return tau, G


def _active_columns(coeffs: np.ndarray) -> np.ndarray:
    return np.flatnonzero(np.any(coeffs != 0, axis=0))


def xsb_norm_coeffs(coeffs, times, xi, L: float, spec: NormSpec, window=None) -> float:
    """X^{m,b}_phi surrogate of the sampled spectra ``coeffs`` (shape (K, n_xi))."""
    if spec.kind != "X":
        raise InvalidArgument("xsb_norm needs a NormSpec of kind 'X'")
    c = np.asarray(coeffs)
    cols = _active_columns(c)
    if cols.size == 0:
        return 0.0
    xi = np.asarray(xi, dtype=np.float64)[cols]
    tau, G = temporal_spectrum(c[:, cols], times, xi, spec.phase, window)
    dtau = abs(tau[1] - tau[0])
    w_tau = (1.0 + tau**2) ** spec.b
    w_xi = (1.0 + xi**2) ** spec.m
    total = np.sum(w_xi * np.sum(w_tau[:, None] * np.abs(G) ** 2, axis=0))
    return float(np.sqrt(L * dtau * total))


def y_norm_coeffs(coeffs, times, xi, L: float, spec: NormSpec, window=None) -> float:
    """Y^m_phi surrogate: L^1 in tau, then L^2 in xi, of <xi>^m <tau'>^-1 G."""
    if spec.kind != "Y":
        raise InvalidArgument("y_norm needs a NormSpec of kind 'Y'")
    c = np.asarray(coeffs)
    cols = _active_columns(c)
    if cols.size == 0:
        return 0.0
    xi = np.asarray(xi, dtype=np.float64)[cols]
    tau, G = temporal_spectrum(c[:, cols], times, xi, spec.phase, window)
    dtau = abs(tau[1] - tau[0])
    l1 = dtau * np.sum(np.abs(G) / np.sqrt(1.0 + tau**2)[:, None], axis=0)
    return float(np.sqrt(L * np.sum((1.0 + xi**2) ** spec.m * l1**2)))


def _trajectory_coeffs(traj: Trajectory, spec: NormSpec, component: str | None):
    name = component or COMPONENT[spec.phase]
    if name not in ("u", "n_plus", "n_minus"):
        raise InvalidArgument(f"unknown component {name!r}")
    return traj.component(name, spectral=True)


def xsb_norm(
    traj: Trajectory,
    spec: NormSpec,
    window: CutoffWindow | None = None,
    component: str | None = None,
) -> float:
    """Windowed surrogate of ||f||_{X^{m,b}_phi} on the trajectory's time range.

    ``component`` defaults to the field matching the phase (u for schrodinger,
    n_plus / n_minus for the wave phases).  ``window=None`` means psi = 1.
    """
    w = window_samples(window, traj.times)
    coeffs = _trajectory_coeffs(traj, spec, component)
    return xsb_norm_coeffs(coeffs, traj.times, traj.grid.ks, traj.grid.L, spec, w)


def y_norm(
    traj: Trajectory,
    spec: NormSpec,
    window: CutoffWindow | None = None,
    component: str | None = None,
) -> float:
    w = window_samples(window, traj.times)
    coeffs = _trajectory_coeffs(traj, spec, component)
    return y_norm_coeffs(coeffs, traj.times, traj.grid.ks, traj.grid.L, spec, w)


@dataclass(frozen=True)
class CutoffScaling:
    deltas: np.ndarray
    norms: np.ndarray
    fit: FitResult

    @property
    def exponent(self) -> float:
        return self.fit.exponent


def cutoff_scaling_exponent(
    traj: Trajectory,
    m: float,
    b: float,
    b_prime: float,
    deltas,
    phase: PhaseKind = "schrodinger",
    center: float | None = None,
    component: str | None = None,
) -> CutoffScaling:
    """Fit the delta-exponent of ||psi_delta f||_{X^{m,b'}} over ``deltas``.

    The embedding bound predicts a slope of at least b - b' for f in X^{m,b};
    ``b`` only enters through that hypothesis check.  The window is centered
    at ``center`` (default: middle of the trajectory).
    """
    if not (0.5 > b >= b_prime >= 0):
        raise InvalidArgument(f"need 1/2 > b >= b' >= 0, got b={b}, b'={b_prime}")
    ds = np.asarray(sorted(deltas, reverse=True), dtype=np.float64)
    if ds.size < 3 or np.any(ds <= 0) or np.any(ds > 1):
        raise InvalidArgument("need at least three deltas in (0, 1]")
    t = traj.times
    c = 0.5 * (t[0] + t[-1]) if center is None else float(center)
    spec = NormSpec(m=m, b=b_prime, phase=phase)
    coeffs = _trajectory_coeffs(traj, spec, component)
    norms = []
    for d in ds:
        win = CutoffWindow(float(d), c, t, cutoff_profile((t - c) / d))
        w = window_samples(win, t)
        if np.count_nonzero(w) < 16:
            raise InvalidArgument(f"delta = {d} is not resolved by the trajectory sampling")
        norms.append(xsb_norm_coeffs(coeffs, t, traj.grid.ks, traj.grid.L, spec, w))
    norms = np.asarray(norms)
    return CutoffScaling(ds, norms, fit_power_law(ds, norms))


def critical_envelope(times, center: float, alpha: float) -> np.ndarray:
    """|t - center|^(-alpha), floored at half a time step.

    For 0 < alpha < 1/2 - b this profile lies in H^b_t but its windowed
    X^{0,b'} norms decay exactly like delta^(1/2 - alpha - b') as delta -> 0,
    which makes the embedding exponent visible at moderate delta.
    """
    t = np.asarray(times, dtype=np.float64)
    if alpha < 0:
        raise InvalidArgument(f"alpha must be nonnegative, got {alpha}")
    floor = 0.5 * _uniform_step(t)
    return (np.abs(t - center) + floor) ** (-alpha)


def modulated_free_wave(
    grid: SpectralGrid, mode: int, times, envelope=None, phase: PhaseKind = "schrodinger"
) -> Trajectory:
    """u(x, t) = envelope(t) exp(i(k x - phi(k) t)) for the single mode k = 2 pi mode / L.

    The wave components are zero.  With no envelope this is an exact free
    solution, so the X^{m,b} surrogate only sees the time cutoff.
    """
    t = np.asarray(times, dtype=np.float64)
    env = np.ones_like(t) if envelope is None else np.asarray(envelope, dtype=np.float64)
    if env.shape != t.shape:
        raise InvalidArgument("envelope must have one value per time")
    if not abs(mode) < grid.M // 2:
        raise InvalidArgument(f"mode {mode} is not resolved by M = {grid.M}")
    k = 2 * np.pi * mode / grid.L
    w = float(PHASES[phase](np.asarray(k)))
    zero = np.zeros(grid.M, dtype=np.complex128)
    states = [
        FirstOrderState(grid, a * np.exp(1j * (k * grid.xs - w * tj)), zero, zero)
        for tj, a in zip(t, env)
    ]
    return Trajectory(t, states, None, grid)


# ---------------------------------------------------------------------------
# ensembles of localized free waves


@dataclass(frozen=True)
class EnsembleSpec:
    """Random localized packets at dyadic frequency scales.

    Octave j means carrier frequencies |xi| in [2^j, 2^(j+1)].  ``width`` is
    the spatial envelope width and ``L`` the torus length used by the testers.
    """

    trials: int = 50
    scale_octaves: tuple[int, ...] = (0, 1, 2, 3, 4, 5)
    seed: int = 0
    window_delta: float = 1.0
    profile: Profile = "gaussian-bump"
    L: float = 128 * np.pi
    width: float = 2.0
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "scale_octaves", tuple(int(j) for j in self.scale_octaves))
        if self.trials < 1:
            raise InvalidArgument(f"trials must be at least 1, got {self.trials}")
        if len(self.scale_octaves) < 1:
            raise InvalidArgument("need at least one octave")
        if min(self.scale_octaves) < 0:
            raise InvalidArgument("octaves must be nonnegative (|xi| >= 1)")
        if self.profile not in ("gaussian-bump", "random-band"):
            raise InvalidArgument(f"unknown profile {self.profile!r}")
        if not (0 < self.window_delta <= 1):
            raise InvalidArgument(f"window_delta must lie in (0, 1], got {self.window_delta}")
        if not (self.L > 0 and self.width > 0):
            raise InvalidArgument("L and width must be positive")
        if self.threads < 1:
            raise InvalidArgument("threads must be at least 1")


@dataclass(frozen=True, eq=False)
class RatioStats:
    """Ratios LHS/RHS per octave (rows) and trial (columns)."""

    octaves: np.ndarray
    ratios: np.ndarray
    control: np.ndarray | None = field(default=None)

    @property
    def medians(self) -> np.ndarray:
        return np.median(self.ratios, axis=1)

    @property
    def maxima(self) -> np.ndarray:
        return np.max(self.ratios, axis=1)

    @property
    def spread(self) -> np.ndarray:
        """Per-octave max/median."""
        return self.maxima / self.medians

    @property
    def max_spread(self) -> float:
        return float(np.max(self.spread))

    @property
    def growth_slope(self) -> float:
        """Least-squares slope of log2(median ratio) per octave (0 for one octave)."""
        if self.octaves.size < 2:
            return 0.0
        return float(np.polyfit(self.octaves, np.log2(self.medians), 1)[0])

    def rows(self):
        for j, med, mx, sp in zip(self.octaves, self.medians, self.maxima, self.spread):
            yield {"octave": int(j), "median": float(med), "max": float(mx), "max_over_median": float(sp)}


@dataclass(frozen=True, eq=False)
class Packet:
    """Spectral data of a free wave at time 0 (the window center)."""

    grid: SpectralGrid
    coeffs: np.ndarray
    phase: PhaseKind

    @property
    def active(self) -> np.ndarray:
        return _active_columns(self.coeffs[None, :])

    def at(self, t) -> np.ndarray:
        """Spectra at times ``t`` (shape (len(t), M)); exp(-i t phi) evolution."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        return self.coeffs * np.exp(-1j * np.outer(t, PHASES[self.phase](self.grid.ks)))

    def group_speed(self) -> float:
        xi = np.abs(self.grid.ks[self.active])
        return float(2 * xi.max()) if self.phase == "schrodinger" else 1.0


def _normalise(grid: SpectralGrid, c: np.ndarray) -> np.ndarray:
    norm = np.sqrt(grid.L * np.sum(np.abs(c) ** 2))
    return c / norm if norm > 0 else c


def make_packet(
    grid: SpectralGrid,
    octave: int,
    rng: np.random.Generator,
    phase: PhaseKind = "schrodinger",
    profile: Profile = "gaussian-bump",
    width: float = 2.0,
    sign: int | None = None,
) -> Packet:
    """Unit-L^2 packet centered at L/2 with spectrum inside sign * [2^j, 2^(j+1)].

    gaussian-bump: Gaussian envelope of the given width around a carrier drawn
    uniformly in the octave.  random-band: random complex coefficients over
    the whole octave multiplied in space by the same envelope, then truncated
    back to the octave.  The sign of the band is random unless given.
    """
    lo, hi = 2.0**octave, 2.0 ** (octave + 1)
    if sign is None:
        sign = 1 if rng.random() < 0.5 else -1
    ks = grid.ks
    band = (sign * ks >= lo) & (sign * ks <= hi)
    if not band.any():
        raise InvalidArgument(f"octave {octave} is not resolved on this grid")
    x0 = 0.5 * grid.L
    shift = np.exp(-1j * ks * x0)
    if profile == "gaussian-bump":
        xi0 = sign * rng.uniform(lo, hi)
        amp = np.exp(-0.5 * ((ks - xi0) * width) ** 2)
        amp[amp < 1e-15] = 0.0
        c = amp * shift * np.exp(2j * np.pi * rng.random())
    elif profile == "random-band":
        g = rng.standard_normal(grid.M) + 1j * rng.standard_normal(grid.M)
        spread = grid.to_physical(np.where(band, g, 0.0))
        env = np.exp(-0.5 * ((grid.xs - x0) / width) ** 2)
        c = grid.to_spectral(spread * env)
    else:
        raise InvalidArgument(f"unknown profile {profile!r}")
    c = np.where(band, c, 0.0)
    return Packet(grid, _normalise(grid, c), phase)


def _time_nodes(spread: float, delta: float, min_points: int = 64) -> np.ndarray:
    """Uniform nodes on [-2 delta, 2 delta] resolving integrand frequencies up to ``spread``."""
    omega = spread + 40.0 / delta
    dt = np.pi / omega
    n = max(min_points, int(np.ceil(4 * delta / dt)) + 1)
    return np.linspace(-2 * delta, 2 * delta, n)


def _compact(packet: Packet, weight: np.ndarray | None = None):
    """Active spectrum shifted to the origin: (centred offsets, coefficients, phases)."""
    idx = packet.active
    k = packet.grid.k_index[idx]
    mid = int(np.round(0.5 * (k.min() + k.max())))
    c = packet.coeffs[idx]
    if weight is not None:
        c = c * weight[idx]
    return k - mid, c, PHASES[packet.phase](packet.grid.ks[idx])


def _compact_size(*spans) -> int:
    need = sum(spans) + 2
    return int(2 ** np.ceil(np.log2(max(need, 8))))


def _fields_on_nodes(offsets, c, phases, size, t):
    spec = np.zeros((t.size, size), dtype=np.complex128)
    spec[:, offsets % size] = c * np.exp(-1j * np.outer(t, phases))
    return np.fft.ifft(spec, axis=1) * size


def _phase_spread(phases) -> float:
    return float(np.ptp(phases)) if phases.size else 0.0


def product_l2(a: Packet, b: Packet, delta: float, half_derivative: bool = True) -> float:
    """|| psi_delta^2 (D^(1/2) a)(b) ||_{L^2_{xt}} for free waves centered at t = 0.

    ``b`` may be conjugated by the caller; the modulus of the product is what
    matters.  Time quadrature is the trapezoid rule on nodes resolving the
    integrand's temporal frequencies.
    """
    if not a.grid.same_as(b.grid):
        raise InvalidArgument("packets live on different grids")
    weight = np.sqrt(np.abs(a.grid.ks)) if half_derivative else None
    oa, ca, pa = _compact(a, weight)
    ob, cb, pb = _compact(b)
    if ca.size == 0 or cb.size == 0 or not np.any(ca) or not np.any(cb):
        return 0.0
    size = _compact_size(np.ptp(oa), np.ptp(ob))
    t = _time_nodes(_phase_spread(pa) + _phase_spread(pb), delta)
    psi = cutoff_profile(t / delta)
    dx = a.grid.L / size
    vals = np.empty(t.size)
    for start in range(0, t.size, 256):
        sl = slice(start, start + 256)
        fa = _fields_on_nodes(oa, ca, pa, size, t[sl])
        fb = _fields_on_nodes(ob, cb, pb, size, t[sl])
        vals[sl] = dx * np.sum(np.abs(fa * fb) ** 2, axis=1)
    return float(np.sqrt(np.trapezoid(psi**4 * vals, t)))


def lp_norm(a: Packet, delta: float, p: float) -> float:
    """|| psi_delta a ||_{L^p_{xt}} for a free wave centered at t = 0."""
    o, c, ph = _compact(a)
    if c.size == 0:
        return 0.0
    size = _compact_size(*([np.ptp(o)] * int(np.ceil(p / 2) * 2)))
    q = int(np.ceil(p))
    t = _time_nodes(q * _phase_spread(ph), delta)
    psi = cutoff_profile(t / delta)
    dx = a.grid.L / size
    vals = np.empty(t.size)
    for start in range(0, t.size, 256):
        sl = slice(start, start + 256)
        f = _fields_on_nodes(o, c, ph, size, t[sl])
        vals[sl] = dx * np.sum(np.abs(f) ** p, axis=1)
    return float(np.trapezoid(psi**p * vals, t) ** (1.0 / p))


def packet_norm(a: Packet, m: float, b: float, delta: float, samples: int = 256) -> float:
    """X^{m,b} surrogate (matched phase) of psi_delta times the free wave."""
    t = np.linspace(-2 * delta, 2 * delta, samples)
    idx = a.active
    xi = a.grid.ks[idx]
    coeffs = a.coeffs[idx] * np.exp(-1j * np.outer(t, PHASES[a.phase](xi)))
    spec = NormSpec(m=m, b=b, phase=a.phase)
    return xsb_norm_coeffs(coeffs, t, xi, a.grid.L, spec, cutoff_profile(t / delta))


def _check_geometry(grid: SpectralGrid, packets, delta: float, width: float) -> None:
    speeds = [p.group_speed() for p in packets]
    rel = max(speeds) + (min(speeds) if len(speeds) > 1 else 0.0)
    if 2 * delta * rel + 16 * width > grid.L:
        raise InvalidArgument(
            f"torus length {grid.L:.4g} too short: packets would wrap within the window "
            f"(relative speed {rel:.4g}, delta {delta})"
        )


def tester_grid(L: float, max_octave: int) -> SpectralGrid:
    """Grid resolving carriers up to 2^(max_octave+1) with a 2x margin."""
    kmax = 2.0 ** (max_octave + 2) * L / (2 * np.pi)
    M = int(2 ** np.ceil(np.log2(2 * kmax + 2)))
    return make_grid(L, max(M, 64))


def _trial_seeds(seed: int, n: int) -> list[np.random.Generator]:
    ss = np.random.SeedSequence(seed)
    return [np.random.default_rng(s) for s in ss.spawn(n)]


def _run_trials(ensemble: EnsembleSpec, octaves, trial_fn) -> np.ndarray:
    """ratios[i, j] = trial_fn(octave_i, rng_ij); generators are spawned per cell."""
    octs = list(octaves)
    rngs = _trial_seeds(ensemble.seed, len(octs) * ensemble.trials)
    cells = [(octs[i // ensemble.trials], rngs[i]) for i in range(len(rngs))]
    if ensemble.threads > 1:
        with ThreadPoolExecutor(max_workers=ensemble.threads) as pool:
            out = list(pool.map(lambda c: trial_fn(*c), cells))
    else:
        out = [trial_fn(*c) for c in cells]
    return np.asarray(out, dtype=np.float64).reshape(len(octs), ensemble.trials)


STRICHARTZ_P_RANGE = (2.0, 6.0)


def strichartz_exponent(p: float, eps_b: float = 0.1) -> float:
    """b = (3/2)(1/2 - 1/p) + eps_b."""
    return 1.5 * (0.5 - 1.0 / p) + eps_b


def strichartz_single_ratio(a: Packet, p: float, delta: float, eps_b: float = 0.1) -> float:
    rhs = packet_norm(a, 0.0, strichartz_exponent(p, eps_b), delta)
    return lp_norm(a, delta, p) / rhs if rhs > 0 else 0.0


def strichartz_ratio(ensemble: EnsembleSpec, p: float, eps_b: float = 0.1) -> RatioStats:
    """||psi u||_{L^p_xt} / ||psi u||_{X^{0,b}} with b = (3/2)(1/2 - 1/p)+ for free packets."""
    if not (STRICHARTZ_P_RANGE[0] <= p <= STRICHARTZ_P_RANGE[1]):
        raise InvalidArgument(f"p must lie in [2, 6], got {p}")
    grid = tester_grid(ensemble.L, max(ensemble.scale_octaves))
    delta = ensemble.window_delta

    def trial(octave, rng):
        a = make_packet(grid, octave, rng, "schrodinger", ensemble.profile, ensemble.width)
        return strichartz_single_ratio(a, p, delta, eps_b)

    ratios = _run_trials(ensemble, ensemble.scale_octaves, trial)
    return RatioStats(np.asarray(ensemble.scale_octaves), ratios)


WS_VARIANTS = {
    # variant: ((m, b) for the wave factor, (m, b) for the Schroedinger factor)
    "2.1": (("0", "1/2+"), ("0", "1/2+")),
    "2.2": (("0", "1/2+"), ("0+", "1/2")),
    "2.3": (("0", "1/2"), ("0+", "1/2")),
}
SS_VARIANTS = {
    # variant: ((m, b) for the high-frequency factor, (m, b) for the low one)
    "2.5": (("0", "1/2+"), ("0", "1/2+")),
    "2.6": (("0+", "1/2"), ("0", "1/2")),
}


def _exponents(pair, eps_m: float, eps_b: float) -> tuple[float, float]:
    m_tag, b_tag = pair
    m = eps_m if m_tag == "0+" else 0.0
    b = 0.5 + eps_b if b_tag == "1/2+" else 0.5
    return m, b


def bilinear_single_ratio(
    a: Packet, b: Packet, delta: float, a_norm: tuple[float, float], b_norm: tuple[float, float]
) -> float:
    """||(D^(1/2) a) b|| / (||a||_{X^{a_norm}} ||b||_{X^{b_norm}}), windows psi_delta."""
    lhs = product_l2(a, b, delta)
    if lhs == 0.0:
        return 0.0
    rhs = packet_norm(a, *a_norm, delta) * packet_norm(b, *b_norm, delta)
    return lhs / rhs


def bilinear_ws_ratio(
    ensemble: EnsembleSpec,
    variant: str = "2.1",
    wave: Literal["plus", "minus"] = "plus",
    wave_sign: int | None = None,
    eps_b: float = 0.1,
    eps_m: float = 0.01,
) -> RatioStats:
    """Wave-Schroedinger bilinear ratio ||(D^(1/2)u) n|| / (||n|| ||u||).

    Both factors are packets in the same octave; ``wave_sign`` fixes the sign
    of the wave factor's band (None: random per trial).
    """
    if variant not in WS_VARIANTS:
        raise InvalidArgument(f"unknown wave-Schroedinger variant {variant!r}")
    wave_norm, schr_norm = (_exponents(p, eps_m, eps_b) for p in WS_VARIANTS[variant])
    grid = tester_grid(ensemble.L, max(ensemble.scale_octaves))
    delta = ensemble.window_delta
    phase = "wave_plus" if wave == "plus" else "wave_minus"

    def trial(octave, rng):
        u = make_packet(grid, octave, rng, "schrodinger", ensemble.profile, ensemble.width)
        n = make_packet(grid, octave, rng, phase, ensemble.profile, ensemble.width, wave_sign)
        _check_geometry(grid, (u, n), delta, ensemble.width)
        return bilinear_single_ratio(u, n, delta, schr_norm, wave_norm)

    ratios = _run_trials(ensemble, ensemble.scale_octaves, trial)
    return RatioStats(np.asarray(ensemble.scale_octaves), ratios)


def bilinear_ss_ratio(
    ensemble: EnsembleSpec,
    variant: str = "2.5",
    separation: int = 2,
    low_octave: int = 0,
    control: bool = False,
    eps_b: float = 0.1,
    eps_m: float = 0.01,
) -> RatioStats:
    """Schroedinger-Schroedinger ratio ||(D^(1/2)u1) u2|| / (||u1|| ||u2||).

    u2 sits in ``low_octave`` (|xi2| >= 1), u1 in each of the ensemble's
    octaves, all of which must lie at least ``separation`` octaves above.
    With ``control`` the same statistics are also gathered with u1 in the
    low octave (no separation); they are reported, not constrained.
    """
    if variant not in SS_VARIANTS:
        raise InvalidArgument(f"unknown Schroedinger-Schroedinger variant {variant!r}")
    if separation < 2:
        raise InvalidArgument(f"frequency separation must be at least 2 octaves, got {separation}")
    if low_octave < 0:
        raise InvalidArgument("|xi_2| >= 1 requires a nonnegative low octave")
    if min(ensemble.scale_octaves) - low_octave < separation:
        raise InvalidArgument(
            f"octaves {ensemble.scale_octaves} are not {separation} octaves above {low_octave}"
        )
    high_norm, low_norm = (_exponents(p, eps_m, eps_b) for p in SS_VARIANTS[variant])
    grid = tester_grid(ensemble.L, max(ensemble.scale_octaves))
    delta = ensemble.window_delta

    def trial(octave, rng):
        u1 = make_packet(grid, octave, rng, "schrodinger", ensemble.profile, ensemble.width)
        u2 = make_packet(grid, low_octave, rng, "schrodinger", ensemble.profile, ensemble.width)
        _check_geometry(grid, (u1, u2), delta, ensemble.width)
        return bilinear_single_ratio(u1, u2, delta, high_norm, low_norm)

    ratios = _run_trials(ensemble, ensemble.scale_octaves, trial)
    ctrl = None
    if control:
        ctrl = _run_trials(ensemble, [low_octave], trial)[0]
    return RatioStats(np.asarray(ensemble.scale_octaves), ratios, ctrl)
